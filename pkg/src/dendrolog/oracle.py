"""Oracle machine codes with budgeted, tri-state evaluation.

A code is a small AST over primitive-recursive constructors plus ``Query``
(ask the oracle), ``Apply`` (run the code whose index an expression computes)
and ``SmnIdx`` (the index-level s-m-n function).  The last two make the
recursion-theorem construction in ``fixed_point`` expressible inside the
language.

Evaluation charges one unit per constructor application and per recursion
step.  The result is a ``Value``, ``Undecided`` (a query fell outside the
finite part of the oracle) or ``Exhausted``.  A ``Value`` obtained with some
budget and oracle stays the same for larger budgets and extended oracles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .coding import pair
from .errors import StructuralError

# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Code:
    tag: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return arity(self)

    def __call__(self, *xs, oracle=None, budget=10_000):
        return evaluate(self, list(xs), oracle, budget)


def Zero(n: int = 1) -> Code:
    return Code("Z", (n,))


def Succ() -> Code:
    return Code("S")


def Proj(i: int, n: Optional[int] = None) -> Code:
    n = i + 1 if n is None else n
    if not 0 <= i < n:
        raise StructuralError(f"projection {i} out of range for arity {n}")
    return Code("P", (i, n))


def Const(c: int, n: int = 0) -> Code:
    if c < 0:
        raise StructuralError("constants are naturals")
    return Code("K", (c, n))


def Compose(f: Code, gs) -> Code:
    gs = tuple(gs)
    if gs and len({arity(g) for g in gs}) > 1:
        raise StructuralError("composed functions must share an arity")
    return Code("C", (f, gs))


def Pair(g: Code, h: Code) -> Code:
    return Code("D", (g, h))


def PrimRec(base: Code, step: Code) -> Code:
    """f(xs, 0) = base(xs); f(xs, y+1) = step(xs, y, f(xs, y))."""
    return Code("R", (base, step))


def BoundedMu(p: Code) -> Code:
    """mu(xs, b) = least z < b with p(xs, z) = 0, else b."""
    return Code("M", (p,))


def Query(g: Code) -> Code:
    return Code("Q", (g,))


def Apply(f: Code, gs) -> Code:
    """Run the code with index f(xs) on the arguments gs(xs)."""
    return Code("A", (f, tuple(gs)))


def SmnIdx(e: Code, x: Code) -> Code:
    """Index of smn(decode(e(xs)), [x(xs)])."""
    return Code("I", (e, x))


def Halts(e: Code, x: Code, t: Code) -> Code:
    """1 if the code with index e(xs) halts on x(xs) within t(xs) steps, else 0.

    This is the step-bounded reading of Kleene's T predicate; the simulation
    runs relative to the same oracle."""
    return Code("H", (e, x, t))


def arity(c: Code) -> int:
    t, a = c.tag, c.args
    if t in ("Z",):
        return a[0]
    if t == "S":
        return 1
    if t == "P":
        return a[1]
    if t == "K":
        return a[1]
    if t == "C":
        return arity(a[1][0]) if a[1] else 0
    if t == "D":
        return max(arity(a[0]), arity(a[1]))
    if t == "R":
        return arity(a[0]) + 1
    if t == "M":
        return arity(a[0])
    if t == "Q":
        return arity(a[0])
    if t == "A":
        return max([arity(a[0])] + [arity(g) for g in a[1]])
    if t == "I":
        return max(arity(a[0]), arity(a[1]))
    if t == "H":
        return max(arity(g) for g in a)
    raise StructuralError(f"unknown constructor {t!r}")


# ---------------------------------------------------------------- numbering

_BIG = 1 << 64


def _to_obj(c: Code):
    t, a = c.tag, c.args
    if t == "K" and a[0] >= _BIG:
        # hex keeps huge embedded indices clear of decimal conversion limits
        return [t, hex(a[0]), a[1]]
    if t in ("Z", "P", "K"):
        return [t, *a]
    if t == "S":
        return [t]
    if t == "C":
        return [t, _to_obj(a[0]), [_to_obj(g) for g in a[1]]]
    if t == "A":
        return [t, _to_obj(a[0]), [_to_obj(g) for g in a[1]]]
    return [t] + [_to_obj(x) for x in a]


def _from_obj(o) -> Code:
    try:
        t = o[0]
        if t == "Z":
            return Zero(int(o[1]))
        if t == "S":
            return Succ()
        if t == "P":
            return Proj(int(o[1]), int(o[2]))
        if t == "K":
            c = int(o[1], 16) if isinstance(o[1], str) else int(o[1])
            return Const(c, int(o[2]))
        if t == "C":
            return Compose(_from_obj(o[1]), [_from_obj(g) for g in o[2]])
        if t == "A":
            return Apply(_from_obj(o[1]), [_from_obj(g) for g in o[2]])
        if t == "D":
            return Pair(_from_obj(o[1]), _from_obj(o[2]))
        if t == "R":
            return PrimRec(_from_obj(o[1]), _from_obj(o[2]))
        if t == "M":
            return BoundedMu(_from_obj(o[1]))
        if t == "Q":
            return Query(_from_obj(o[1]))
        if t == "I":
            return SmnIdx(_from_obj(o[1]), _from_obj(o[2]))
        if t == "H":
            return Halts(_from_obj(o[1]), _from_obj(o[2]), _from_obj(o[3]))
    except (IndexError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed code: {exc}") from None
    raise StructuralError(f"unknown constructor {o!r}")


_CODE_TAG = b"\x01"
_TRACE_TAG = b"\x02"


def index(c: Code) -> int:
    """Goedel number: the big-endian integer of a tagged compact JSON text."""
    text = json.dumps(_to_obj(c), separators=(",", ":"))
    return int.from_bytes(_CODE_TAG + text.encode(), "big")


def decode(n: int) -> Code:
    if not isinstance(n, int) or n <= 0:
        raise StructuralError(f"{n!r} is not a code index")
    raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
    if not raw.startswith(_CODE_TAG):
        raise StructuralError(f"{n} is not a code index")
    try:
        obj = json.loads(raw[1:].decode())
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise StructuralError(f"{n} is not a code index") from None
    return _from_obj(obj)


def is_index(n) -> bool:
    try:
        decode(n)
        return True
    except StructuralError:
        return False


# ---------------------------------------------------------------- oracles

class PartialOracle:
    """A finite (or predicate-backed) partial function from N to N."""

    def __init__(self, values: Optional[dict] = None, fn: Optional[Callable] = None):
        self.values = dict(values or {})
        self.fn = fn

    @staticmethod
    def from_bits(bits) -> "PartialOracle":
        return PartialOracle({i: int(b) for i, b in enumerate(bits)})

    def get(self, i: int) -> Optional[int]:
        if i in self.values:
            return self.values[i]
        if self.fn is not None:
            return self.fn(i)
        return None

    def extend(self, more: dict) -> "PartialOracle":
        for k, v in more.items():
            if k in self.values and self.values[k] != v:
                raise StructuralError(f"extension disagrees at {k}")
        return PartialOracle({**self.values, **more}, self.fn)


EMPTY = PartialOracle()


# ---------------------------------------------------------------- results

@dataclass(frozen=True)
class Value:
    value: int


@dataclass(frozen=True)
class Undecided:
    missing: frozenset


@dataclass(frozen=True)
class Exhausted:
    pass


Result = Union[Value, Undecided, Exhausted]


class _Missing(Exception):
    def __init__(self, i):
        self.i = i


class _OutOfBudget(Exception):
    pass


class _Machine:
    def __init__(self, oracle: PartialOracle, budget: int, trace: Optional[list]):
        self.oracle = oracle or EMPTY
        self.left = budget
        self.trace = trace

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise _OutOfBudget

    def run(self, c: Code, xs: list) -> int:
        self.tick()
        t, a = c.tag, c.args
        if t == "Z":
            v = 0
        elif t == "S":
            v = self._arg(xs, 0) + 1
        elif t == "P":
            v = self._arg(xs, a[0])
        elif t == "K":
            v = a[0]
        elif t == "C":
            ys = [self.run(g, xs) for g in a[1]]
            v = self.run(a[0], ys)
        elif t == "D":
            v = pair(self.run(a[0], xs), self.run(a[1], xs))
        elif t == "R":
            if not xs:
                raise StructuralError("primitive recursion needs an argument")
            *pre, y = xs
            v = self.run(a[0], pre)
            for k in range(y):
                v = self.run(a[1], pre + [k, v])
        elif t == "M":
            if not xs:
                raise StructuralError("bounded search needs a bound")
            *pre, b = xs
            v = b
            for z in range(b):
                if self.run(a[0], pre + [z]) == 0:
                    v = z
                    break
        elif t == "Q":
            i = self.run(a[0], xs)
            got = self.oracle.get(i)
            if got is None:
                raise _Missing(i)
            v = got
        elif t == "A":
            f = decode(self.run(a[0], xs))
            ys = [self.run(g, xs) for g in a[1]]
            v = self.run(f, ys)
        elif t == "I":
            e = decode(self.run(a[0], xs))
            v = index(smn(e, [self.run(a[1], xs)]))
        elif t == "H":
            e, x, steps = (self.run(g, xs) for g in a)
            try:
                code = decode(e)
            except StructuralError:
                code = None
            v = 0
            if code is not None:
                sub = _Machine(self.oracle, steps, None)
                try:
                    sub.run(code, [x])
                    v = 1
                except _OutOfBudget:
                    v = 0
                except StructuralError:
                    v = 0
        else:
            raise StructuralError(f"unknown constructor {t!r}")
        if self.trace is not None:
            self.trace.append([t, list(xs), v])
        return v

    @staticmethod
    def _arg(xs, i):
        if i >= len(xs):
            raise StructuralError(f"argument {i} missing (got {len(xs)})")
        return xs[i]


def evaluate(c: Code, args, oracle: Optional[PartialOracle] = None, budget: int = 10_000,
             trace: Optional[list] = None) -> Result:
    if isinstance(c, int):
        c = decode(c)
    m = _Machine(oracle, budget, trace)
    try:
        return Value(m.run(c, list(args)))
    except _Missing as exc:
        return Undecided(frozenset([exc.i]))
    except _OutOfBudget:
        return Exhausted()


eval_code = evaluate


# ---------------------------------------------------------------- s-m-n, recursion theorem

def smn(e: Code, fixed) -> Code:
    """Fix the first len(fixed) arguments of e."""
    if isinstance(e, int):
        e = decode(e)
    fixed = list(fixed)
    n = arity(e)
    if len(fixed) > n:
        raise StructuralError(f"cannot fix {len(fixed)} arguments of an arity-{n} code")
    k = n - len(fixed)
    gs = [Const(c, k) for c in fixed] + [Proj(i, k) for i in range(k)]
    if not gs:
        return e
    return Compose(e, gs)


def fixed_point(k: Code) -> Code:
    """A code e (unary) with {e}(n) = {{k}(index e)}(n) wherever both converge.

    h(m) is the index of n |-> {{m}(m)}(n); m is the index of x |-> {k}(h(x));
    the answer is the code with index h(m).
    """
    if isinstance(k, int):
        k = decode(k)
    diag = Apply(Apply(Proj(0, 2), [Proj(0, 2)]), [Proj(1, 2)])
    h = SmnIdx(Const(index(diag), 1), Proj(0, 1))
    m = index(Apply(Const(index(k), 1), [h]))
    return smn(diag, [m])


# ---------------------------------------------------------------- traces, TJ

def trace_code(trace: list) -> int:
    text = json.dumps(trace, separators=(",", ":"))
    return int.from_bytes(_TRACE_TAG + text.encode(), "big")


def decode_trace(t: int) -> Optional[list]:
    if not isinstance(t, int) or t <= 0:
        return None
    raw = t.to_bytes((t.bit_length() + 7) // 8, "big")
    if not raw.startswith(_TRACE_TAG):
        return None
    try:
        return json.loads(raw[1:].decode())
    except (UnicodeDecodeError, json.JSONDecodeError):
        return None


def run_with_trace(e, x: int, oracle=None, budget: int = 10_000):
    """Evaluate {e}(x) and return (result, trace code or None)."""
    trace = []
    try:
        r = evaluate(e, [x], oracle, budget, trace)
    except StructuralError:
        return Exhausted(), None
    return r, (trace_code(trace) if isinstance(r, Value) else None)


def t_predicate(e, x: int, t: int, oracle=None) -> bool:
    """Does t code a complete halting computation of {e}(x) relative to the oracle?"""
    tr = decode_trace(t)
    if tr is None:
        return False
    try:
        code = decode(e) if isinstance(e, int) else e
    except StructuralError:
        return False
    replay = []
    try:
        r = evaluate(code, [x], oracle, len(tr), replay)
    except StructuralError:
        return False
    return isinstance(r, Value) and replay == tr


YES = "yes"
NO_WITHIN_BUDGET = "no_within_budget"
UNDECIDED = "undecided"


def tj_member(x: int, oracle=None, budget: int = 10_000) -> str:
    """Tri-state membership of x in the Turing jump of the oracle.

    A witnessing computation of cost below the budget exists exactly when the
    budgeted run of {x}(x) halts, so the search over traces is the run itself.
    """
    try:
        code = decode(x)
    except StructuralError:
        return NO_WITHIN_BUDGET
    r, t = run_with_trace(code, x, oracle, budget)
    if isinstance(r, Value):
        assert t_predicate(code, x, t, oracle)
        return YES
    if isinstance(r, Undecided):
        return UNDECIDED
    return NO_WITHIN_BUDGET


# ---------------------------------------------------------------- a small library

def _c(f, *gs):
    return Compose(f, list(gs))


ADD = PrimRec(Proj(0, 1), _c(Succ(), Proj(2, 3)))
PRED = PrimRec(Const(0, 0), Proj(0, 2))
MONUS = PrimRec(Proj(0, 1), _c(PRED, Proj(2, 3)))
MUL = PrimRec(Const(0, 1), _c(ADD, Proj(2, 3), Proj(0, 3)))
SG = PrimRec(Const(0, 0), Const(1, 2))
NSG = PrimRec(Const(1, 0), Const(0, 2))
LEQ = _c(NSG, _c(MONUS, Proj(0, 2), Proj(1, 2)))   # x <= y
AND = _c(MUL, _c(SG, Proj(0, 2)), _c(SG, Proj(1, 2)))


def ID_ON_ORACLE() -> Code:
    """x |-> x if the oracle holds x, else 0."""
    return _c(MUL, Proj(0, 1), Query(Proj(0, 1)))


def CONST(c: int, n: int = 1) -> Code:
    return Const(c, n)


def fin_order_code(n: int) -> Code:
    """Binary code of the order 0 < ... < n-1: 1 iff x, y < n and x <= y."""
    lt_n = lambda p: _c(LEQ, _c(Succ(), p), Const(n, 2))
    return _c(AND, _c(AND, lt_n(Proj(0, 2)), lt_n(Proj(1, 2))), LEQ)


def omega_star_code() -> Code:
    """Binary code of N reversed: 1 iff y <= x."""
    return _c(LEQ, Proj(1, 2), Proj(0, 2))


def omega_code() -> Code:
    return LEQ


def to_json(c: Code):
    return _to_obj(c)


def from_json(o) -> Code:
    return _from_obj(o)


# ---------------------------------------------------------------- sampled self-check

def random_code(rng, n: int, depth: int = 3, oracle: bool = True) -> Code:
    """A small total code of arity n (BoundedMu aside, everything terminates)."""
    if depth <= 0 or rng.random() < 0.3:
        pick = rng.randrange(3)
        if pick == 0 and n:
            return Proj(rng.randrange(n), n)
        if pick == 1:
            return Const(rng.randrange(4), n)
        return Zero(n) if n else Const(0, 0)
    pick = rng.randrange(5 if oracle else 4)
    if pick == 0:
        return Compose(Succ(), [random_code(rng, n, depth - 1, oracle)])
    if pick == 1:
        return Compose(rng.choice([ADD, MUL, LEQ, MONUS]),
                       [random_code(rng, n, depth - 1, oracle) for _ in range(2)])
    if pick == 2 and n:
        base = random_code(rng, n - 1, depth - 1, oracle)
        step = random_code(rng, n + 1, depth - 1, oracle)
        inner = PrimRec(base, step)
        # recurse on a small argument only
        small = Compose(MONUS, [Proj(0, n), Compose(MONUS, [Proj(0, n), Const(3, n)])])
        return Compose(inner, [small] + [Proj(i, n) for i in range(1, n)])
    if pick == 3:
        return random_code(rng, n, depth - 1, oracle)
    return Query(random_code(rng, n, depth - 1, oracle)) if n else Const(1, 0)


def _same(r, s) -> bool:
    return isinstance(r, Value) and isinstance(s, Value) and r.value == s.value


def check_kernel(samples: int = 50, seed: int = 0, budget: int = 20_000) -> dict:
    """s-m-n and recursion-theorem equations on sampled codes, plus the
    budget sweep: a Value at one budget is the same Value at every larger one."""
    import random
    rng = random.Random(seed)
    rep = {"smn": [0, 0], "fixed_point": [0, 0], "budget_monotone": [0, 0], "failures": []}

    def note(law, ok, ex):
        rep[law][0] += 1
        if not ok:
            rep[law][1] += 1
            rep["failures"].append({"law": law, **ex})

    def rand_oracle():
        return PartialOracle({i: rng.randrange(2) for i in range(rng.randrange(12))})

    done = 0
    while done < samples:
        n = rng.randint(1, 3)
        e = random_code(rng, n, 3)
        xs = [rng.randrange(5) for _ in range(n)]
        o = rand_oracle()
        k = rng.randint(0, n)
        full = evaluate(e, xs, o, budget)
        if not isinstance(full, Value):
            continue
        done += 1
        part = evaluate(smn(e, xs[:k]), xs[k:], o, budget)
        note("smn", _same(full, part), {"code": to_json(e), "args": xs, "fixed": k})

        c2 = random_code(rng, 2, 2, oracle=False)
        kk = SmnIdx(Const(index(c2), 1), Proj(0, 1))
        fp = fixed_point(kk)
        x = rng.randrange(5)
        lhs = evaluate(fp, [x], o, budget)
        rhs = evaluate(c2, [index(fp), x], o, budget)
        note("fixed_point", _same(lhs, rhs) or not isinstance(rhs, Value),
             {"code": to_json(c2), "x": x})

        prev = None
        for b in (5, 20, 80, 320, budget):
            r = evaluate(e, xs, o, b)
            if isinstance(prev, Value):
                note("budget_monotone", _same(prev, r), {"code": to_json(e), "budget": b})
            if isinstance(r, Value):
                prev = r
    for law in ("smn", "fixed_point", "budget_monotone"):
        c, v = rep[law]
        rep[law] = {"checked": c, "violations": v}
    return rep
