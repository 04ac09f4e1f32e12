"""Natural-number codings: Cantor pairing and a bijective sequence code.

Structured elements (ints, tuples of ints, nested tuples) are kept as Python
values in memory; ``code_of`` maps them to naturals when a numeric code is
needed, e.g. for the pair-lexicographic comparisons of the disjunction order.
"""

from math import isqrt


def pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError("negative code")
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def encode_seq(items) -> int:
    """Bijection N^<w -> N: <> |-> 0 and <x>^s |-> 1 + pair(x, code(s))."""
    code = 0
    for x in reversed(list(items)):
        code = 1 + pair(x, code)
    return code


def decode_seq(code: int) -> tuple[int, ...]:
    out = []
    while code:
        x, code = unpair(code - 1)
        out.append(x)
    return tuple(out)


def code_of(x) -> int:
    """Numeric code of a structured element.

    Injective on ints and on tuples separately; the orders in this package
    never mix the two shapes inside one field.
    """
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        if x < 0:
            raise ValueError(f"negative element {x}")
        return x
    if isinstance(x, tuple):
        return encode_seq(code_of(y) for y in x)
    if isinstance(x, str):
        return encode_seq(x.encode())
    raise TypeError(f"cannot code {x!r}")
