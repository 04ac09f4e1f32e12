"""Linear orders with optional capabilities, increasing maps, and the
Kleene-Brouwer linearization of trees.

An order is a field test plus a comparator.  Enumeration and a canonical
descending generator are optional capabilities; code that needs one checks
for it and raises ``CapabilityError`` if it is missing.

Elements are plain Python values: ints for the basic orders, tagged tuples
for sums and products, tuples of atoms for tree orders.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Any, Callable, Iterable, Iterator, Optional

from .coding import code_of
from .errors import CapabilityError, DomainError, StructuralError

WF_YES = "wellfounded"
WF_NO = "illfounded"
WF_UNKNOWN = "unknown"

DEFAULT_WINDOW = 256


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


class LinearOrder:
    """A linear order described by its field test and comparator.

    ``compare`` returns -1, 0 or 1.  ``enum`` (if given) yields the field
    without repetition.  ``desc`` (if given) maps n to a strictly descending
    list of n elements.  ``search`` picks the strategy used by
    ``find_descending``: "window" sorts an enumerated window, "branch" asks a
    tree order for a branch and reads off its prefix chain.
    """

    def __init__(
        self,
        kind: str,
        contains: Callable[[Any], bool],
        compare: Callable[[Any, Any], int],
        enum: Optional[Callable[[], Iterator[Any]]] = None,
        desc: Optional[Callable[[int], Optional[list]]] = None,
        size: Optional[int] = None,
        wf: str = WF_UNKNOWN,
        params: Optional[dict] = None,
        search: str = "window",
        branch: Optional[Callable[[int, int], Optional[list]]] = None,
    ):
        self.kind = kind
        self._contains = contains
        self._compare = compare
        self._enum = enum
        self._desc = desc
        self.size = size
        self.wf = wf
        self.params = params or {}
        self.search = search
        self._branch = branch

    # capabilities
    @property
    def has_enumerator(self) -> bool:
        return self._enum is not None

    @property
    def has_descending(self) -> bool:
        return self._desc is not None

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    def contains(self, x) -> bool:
        try:
            return bool(self._contains(x))
        except (TypeError, ValueError):
            return False

    def check(self, x):
        if not self.contains(x):
            raise DomainError(f"{x!r} is not in the field of {self.kind}")
        return x

    def compare(self, x, y) -> int:
        self.check(x)
        self.check(y)
        return _sign(self._compare(x, y))

    def lt(self, x, y) -> bool:
        return self.compare(x, y) < 0

    def le(self, x, y) -> bool:
        return self.compare(x, y) <= 0

    def elements(self, limit: Optional[int] = None) -> Iterator[Any]:
        if self._enum is None:
            raise CapabilityError(f"{self.kind} has no enumerator")
        it = self._enum()
        return it if limit is None else itertools.islice(it, limit)

    def sorted(self, xs: Iterable) -> list:
        return sorted(xs, key=cmp_to_key(self.compare))

    def window(self, limit: int = DEFAULT_WINDOW) -> list:
        """The first ``limit`` enumerated elements, sorted ascending."""
        return self.sorted(self.elements(limit))

    def descending(self, n: int) -> Optional[list]:
        if self._desc is None:
            raise CapabilityError(f"{self.kind} has no descending generator")
        return self._desc(n)

    def to_json(self) -> dict:
        d = {"kind": self.kind}
        d.update(self.params)
        return d

    def __repr__(self):
        return f"LinearOrder({self.to_json()})"


# ---------------------------------------------------------------- basic orders

def Finite(elems: Iterable) -> LinearOrder:
    """Finite order on the listed codes; the listing order is the order."""
    elems = list(elems)
    rank = {}
    for i, e in enumerate(elems):
        if e in rank:
            raise StructuralError(f"duplicate element {e!r}")
        rank[e] = i

    def contains(x):
        return x in rank

    def desc(n):
        return list(reversed(elems))[:n] if n <= len(elems) else None

    return LinearOrder(
        "finite",
        contains,
        lambda x, y: rank[x] - rank[y],
        enum=lambda: iter(elems),
        desc=desc,
        size=len(elems),
        wf=WF_YES,
        params={"elements": list(elems)},
    )


def fin(n: int) -> LinearOrder:
    """The ordinal n, presented as Finite([0, ..., n-1])."""
    return Finite(range(n))


def _is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def Omega() -> LinearOrder:
    return LinearOrder(
        "omega", _is_nat, lambda x, y: x - y,
        enum=lambda: itertools.count(), wf=WF_YES,
    )


def OmegaStar() -> LinearOrder:
    """N with the reversed order; 0 is the top."""
    return LinearOrder(
        "omega_star", _is_nat, lambda x, y: y - x,
        enum=lambda: itertools.count(),
        desc=lambda n: list(range(n)),
        wf=WF_NO,
    )


def _interleave(*its):
    its = [iter(i) for i in its]
    while its:
        alive = []
        for it in its:
            try:
                yield next(it)
                alive.append(it)
            except StopIteration:
                pass
        its = alive


def Sum(left: LinearOrder, right: LinearOrder) -> LinearOrder:
    """left + right, elements tagged (0, x) and (1, y)."""

    def contains(z):
        return (isinstance(z, tuple) and len(z) == 2 and
                ((z[0] == 0 and left.contains(z[1])) or (z[0] == 1 and right.contains(z[1]))))

    def cmp(a, b):
        if a[0] != b[0]:
            return a[0] - b[0]
        return (left if a[0] == 0 else right).compare(a[1], b[1])

    enum = None
    if left.has_enumerator and right.has_enumerator:
        def enum():
            l = ((0, x) for x in left.elements())
            r = ((1, y) for y in right.elements())
            if left.is_finite:
                return itertools.chain(l, r)
            return _interleave(l, r)

    desc = None
    if right.has_descending:
        def desc(n):
            d = right.descending(n)
            return None if d is None else [(1, y) for y in d]
    elif left.has_descending:
        def desc(n):
            d = left.descending(n)
            return None if d is None else [(0, x) for x in d]

    wf = WF_YES if left.wf == right.wf == WF_YES else (
        WF_NO if WF_NO in (left.wf, right.wf) else WF_UNKNOWN)
    size = left.size + right.size if left.is_finite and right.is_finite else None
    return LinearOrder("sum", contains, cmp, enum=enum, desc=desc, size=size, wf=wf,
                       params={"left": left.to_json(), "right": right.to_json()})


def Lex(left: LinearOrder, right: LinearOrder) -> LinearOrder:
    """Pairs (x, y) compared by x first, then y."""

    def contains(z):
        return isinstance(z, tuple) and len(z) == 2 and left.contains(z[0]) and right.contains(z[1])

    def cmp(a, b):
        c = left.compare(a[0], b[0])
        return c if c else right.compare(a[1], b[1])

    enum = None
    if left.has_enumerator and right.has_enumerator:
        def enum():
            if left.is_finite and right.is_finite:
                yield from itertools.product(left.elements(), right.elements())
                return
            ls, rs = [], []
            li, ri = left.elements(), right.elements()
            l_done = r_done = False
            seen = set()
            while not (l_done and r_done):
                if not l_done:
                    try:
                        ls.append(next(li))
                    except StopIteration:
                        l_done = True
                if not r_done:
                    try:
                        rs.append(next(ri))
                    except StopIteration:
                        r_done = True
                for x in ls:
                    for y in rs:
                        if (x, y) not in seen:
                            seen.add((x, y))
                            yield (x, y)

    desc = None
    if left.has_descending:
        def desc(n):
            d = left.descending(n)
            if d is None:
                return None
            if not right.has_enumerator:
                return None
            y0 = next(iter(right.elements(1)), None)
            return None if y0 is None else [(x, y0) for x in d]
    elif right.has_descending and left.has_enumerator:
        def desc(n):
            d = right.descending(n)
            x0 = next(iter(left.elements(1)), None)
            return None if d is None or x0 is None else [(x0, y) for y in d]

    wf = WF_YES if left.wf == right.wf == WF_YES else (
        WF_NO if WF_NO in (left.wf, right.wf) else WF_UNKNOWN)
    size = left.size * right.size if left.is_finite and right.is_finite else None
    return LinearOrder("lex", contains, cmp, enum=enum, desc=desc, size=size, wf=wf,
                       params={"left": left.to_json(), "right": right.to_json()})


def Derived(name: str, contains: Callable, compare: Callable, enum=None, desc=None,
            size=None, wf=WF_UNKNOWN) -> LinearOrder:
    """An order given directly by a comparator and field test."""
    return LinearOrder("derived", contains, compare, enum=enum, desc=desc, size=size, wf=wf,
                       params={"name": name})


def reverse(order: LinearOrder) -> LinearOrder:
    """The same field with the order flipped."""
    return LinearOrder(
        "reverse", order.contains, lambda x, y: order.compare(y, x),
        enum=order._enum, size=order.size, wf=WF_UNKNOWN,
        params={"of": order.to_json()},
    )


INF = "inf"


def OmegaPlusOne() -> LinearOrder:
    """N followed by a top element ``INF``."""

    def contains(x):
        return x == INF or _is_nat(x)

    def cmp(x, y):
        if x == INF or y == INF:
            return (x == INF) - (y == INF)
        return x - y

    return LinearOrder("omega_plus_one", contains, cmp,
                       enum=lambda: itertools.chain([INF], itertools.count()), wf=WF_YES)


# ---------------------------------------------------------------- maps

class IncreasingMap:
    """A strictly increasing map between two orders.

    The graph is stored for finite domains; ``fn`` may back the map on an
    infinite domain instead.
    """

    def __init__(self, domain: LinearOrder, codomain: LinearOrder,
                 mapping: Optional[dict] = None, fn: Optional[Callable] = None,
                 validate: bool = True):
        if mapping is None and fn is None:
            raise StructuralError("a map needs a graph or a function")
        self.domain = domain
        self.codomain = codomain
        self.mapping = dict(mapping) if mapping is not None else None
        self.fn = fn
        if validate and self.mapping is not None:
            self._validate()

    def _validate(self):
        if self.domain.is_finite:
            dom = list(self.domain.elements())
            if set(dom) != set(self.mapping):
                raise StructuralError("map graph does not cover its domain")
        else:
            dom = list(self.mapping)
        dom = self.domain.sorted(dom)
        for x in dom:
            self.codomain.check(self.mapping[x])
        for a, b in zip(dom, dom[1:]):
            if not self.codomain.lt(self.mapping[a], self.mapping[b]):
                raise StructuralError(f"map is not increasing at {a!r} < {b!r}")

    def __call__(self, x):
        self.domain.check(x)
        if self.mapping is not None:
            return self.mapping[x]
        return self.fn(x)

    def compose(self, inner: "IncreasingMap") -> "IncreasingMap":
        """self after inner."""
        if inner.mapping is not None:
            return IncreasingMap(inner.domain, self.codomain,
                                 {x: self(y) for x, y in inner.mapping.items()}, validate=False)
        return IncreasingMap(inner.domain, self.codomain, fn=lambda x: self(inner(x)))

    def pairs(self) -> list:
        if self.mapping is None:
            raise CapabilityError("function-backed map has no finite graph")
        return [(x, self.mapping[x]) for x in self.domain.sorted(self.mapping)]

    def to_json(self):
        return {"pairs": [[x, y] for x, y in self.pairs()]}

    @staticmethod
    def identity(order: LinearOrder) -> "IncreasingMap":
        if order.is_finite:
            return IncreasingMap(order, order, {x: x for x in order.elements()}, validate=False)
        return IncreasingMap(order, order, fn=lambda x: x)

    def __repr__(self):
        if self.mapping is not None:
            return f"IncreasingMap({self.pairs()})"
        return "IncreasingMap(<fn>)"


def increasing_maps(domain: LinearOrder, codomain: LinearOrder) -> Iterator[IncreasingMap]:
    """All increasing maps between two finite orders, in lex order of images."""
    dom = domain.window(domain.size)
    cod = codomain.window(codomain.size)
    for combo in itertools.combinations(cod, len(dom)):
        yield IncreasingMap(domain, codomain, dict(zip(dom, combo)), validate=False)


@dataclass
class DescendingWitness:
    """A strictly descending finite sequence in ``order``."""

    order: LinearOrder
    elements: list

    def validate(self) -> bool:
        return all(self.order.lt(b, a) for a, b in zip(self.elements, self.elements[1:]))

    def __len__(self):
        return len(self.elements)

    def to_json(self):
        return {"elements": _jsonable(self.elements)}


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    if isinstance(x, list):
        return [_jsonable(y) for y in x]
    return x


# ---------------------------------------------------------------- trees

def kb_compare(s: tuple, t: tuple, base_cmp: Callable[[Any, Any], int]) -> int:
    """Kleene-Brouwer: at the first difference compare by the base order;
    a proper extension sits below its prefix."""
    for a, b in zip(s, t):
        if a != b:
            c = base_cmp(a, b)
            if c:
                return _sign(c)
    return _sign(len(t) - len(s))


def kb_linearize(tree: Iterable[tuple], base: LinearOrder, search: str = "window") -> LinearOrder:
    """The Kleene-Brouwer order on a finite prefix-closed tree over ``base``."""
    nodes = [tuple(s) for s in tree]
    node_set = set(nodes)
    if len(node_set) != len(nodes):
        raise StructuralError("duplicate node in tree")
    for s in nodes:
        for a in s:
            base.check(a)
        if s and s[:-1] not in node_set:
            raise StructuralError(f"tree is not prefix-closed at {s!r}")
    if nodes and () not in node_set:
        raise StructuralError("tree is missing its root")

    def cmp(s, t):
        return kb_compare(s, t, base.compare)

    ordered = sorted(nodes, key=cmp_to_key(cmp))
    children = {}
    for s in ordered:
        if s:
            children.setdefault(s[:-1], []).append(s)

    def branch(depth, budget):
        return _tree_branch(lambda s: children.get(s, []), depth, budget)

    return LinearOrder(
        "from_tree", lambda s: isinstance(s, tuple) and s in node_set, cmp,
        enum=lambda: iter(ordered),
        size=len(nodes), wf=WF_YES,
        params={"nodes": len(nodes)}, search=search, branch=branch,
    )


def _tree_branch(children: Callable, depth: int, budget: int = 100000) -> Optional[list]:
    """Leftmost node of length ``depth`` by depth-first search; None if absent."""
    stack = [()]
    spent = 0
    while stack:
        s = stack.pop()
        spent += 1
        if spent > budget:
            return None
        if len(s) == depth:
            return s
        stack.extend(reversed(list(children(s))))
    return None


def lazy_tree_order(kind: str, in_tree: Callable[[tuple], bool], base_cmp: Callable,
                    children: Callable[[tuple], list], params=None,
                    enum_budget: Optional[int] = None, search: str = "branch") -> LinearOrder:
    """KB order on a possibly infinite tree given by membership and a
    child enumerator.  Enumeration is breadth-first over ``children``."""

    def cmp(s, t):
        return kb_compare(s, t, base_cmp)

    def enum():
        frontier = [()]
        count = 0
        while frontier:
            nxt = []
            for s in frontier:
                yield s
                count += 1
                if enum_budget is not None and count >= enum_budget:
                    return
                nxt.extend(children(s))
            frontier = nxt

    def branch(depth, budget):
        return _tree_branch(children, depth, budget)

    return LinearOrder(kind, lambda s: isinstance(s, tuple) and in_tree(s), cmp,
                       enum=enum, params=params or {}, search=search, branch=branch)


def FromTree(tree, base: LinearOrder) -> LinearOrder:
    return kb_linearize(tree, base)


def disjunction(a: LinearOrder, b: LinearOrder) -> LinearOrder:
    """KB order on pairs of simultaneously descending sequences.

    Well-founded iff a or b is.  Pairs are compared lexicographically by the
    numeric codes of their components.
    """

    def ok(s):
        if not isinstance(s, tuple):
            return False
        for p in s:
            if not (isinstance(p, tuple) and len(p) == 2 and a.contains(p[0]) and b.contains(p[1])):
                return False
        for p, q in zip(s, s[1:]):
            if not (a.lt(q[0], p[0]) and b.lt(q[1], p[1])):
                return False
        return True

    def base_cmp(p, q):
        kp = (code_of(p[0]), code_of(p[1]))
        kq = (code_of(q[0]), code_of(q[1]))
        return (kp > kq) - (kp < kq)

    def cmp(s, t):
        return kb_compare(s, t, base_cmp)

    enum = None
    if a.has_enumerator and b.has_enumerator:
        def enum():
            # round n: nodes of length <= n over the first n elements of a and b
            seen = set()
            a_it, b_it = a.elements(), b.elements()
            xs, ys = [], []
            a_done = b_done = False
            n = 0
            while True:
                n += 1
                grew = False
                if not a_done:
                    try:
                        xs.append(next(a_it)); grew = True
                    except StopIteration:
                        a_done = True
                if not b_done:
                    try:
                        ys.append(next(b_it)); grew = True
                    except StopIteration:
                        b_done = True
                frontier = [()]
                new = []
                while frontier:
                    nxt = []
                    for s in frontier:
                        if s not in seen:
                            seen.add(s)
                            new.append(s)
                        if len(s) >= n and not (a_done and b_done):
                            continue
                        for x in xs:
                            if s and not a.lt(x, s[-1][0]):
                                continue
                            for y in ys:
                                if s and not b.lt(y, s[-1][1]):
                                    continue
                                nxt.append(s + ((x, y),))
                    frontier = nxt
                yield from new
                if not grew:
                    return

    size = None
    if a.is_finite and b.is_finite:
        from math import comb
        size = comb(a.size + b.size, a.size)
    wf = WF_YES if WF_YES in (a.wf, b.wf) else (
        WF_NO if a.wf == b.wf == WF_NO else WF_UNKNOWN)
    return LinearOrder("disjunction", ok, cmp, enum=enum, size=size, wf=wf,
                       params={"left": a.to_json(), "right": b.to_json()})


# ---------------------------------------------------------------- search

def find_descending(order: LinearOrder, depth: int, window: int = DEFAULT_WINDOW,
                    budget: int = 100000) -> Optional[DescendingWitness]:
    """A descending sequence of length ``depth``, or None if none was found.

    For a finite order with an enumerator None is a proof of absence; in
    general it only means the search came back empty.
    """
    if depth <= 0:
        return DescendingWitness(order, [])
    if order.has_descending:
        d = order.descending(depth)
        if d is not None and len(d) >= depth:
            return DescendingWitness(order, list(d[:depth]))
        if order.is_finite:
            return None
    if order.search == "branch" and order._branch is not None:
        s = order._branch(depth - 1, budget)
        if s is None:
            return None
        return DescendingWitness(order, [s[:i] for i in range(depth)])
    if not order.has_enumerator:
        raise CapabilityError(f"{order.kind} offers no way to search for descending chains")
    limit = order.size if order.is_finite else window
    w = order.window(limit)
    if len(w) < depth:
        return None
    return DescendingWitness(order, list(reversed(w))[:depth])


def find_embedding(a: LinearOrder, b: LinearOrder, depth: int,
                   window: int = DEFAULT_WINDOW) -> Optional[IncreasingMap]:
    """Greedy increasing map from the first ``depth`` elements of a into b."""
    src = a.sorted(a.elements(depth))
    limit = b.size if b.is_finite else window
    tgt = b.window(limit)
    if len(tgt) < len(src):
        return None
    dom = Finite(src)
    return IncreasingMap(dom, b, dict(zip(src, tgt[:len(src)])))


def embed_into_disjunction(a: LinearOrder, b: LinearOrder, k: int,
                           witness: Optional[DescendingWitness] = None) -> IncreasingMap:
    """Order embedding of the first k elements of a into disjunction(a, b),
    given a descending sequence of length k in b.

    x is sent to the records (running a-minima) of the elements >= x, scanned
    in code order, each paired with the matching entry of the witness.
    """
    if witness is None:
        witness = find_descending(b, k)
    if witness is None or len(witness) < k:
        raise CapabilityError("no descending witness of the required length in b")
    bs = witness.elements
    cs = sorted(a.elements(k), key=code_of)
    d = disjunction(a, b)
    mapping = {}
    for x in cs:
        recs = []
        for c in cs:
            if a.le(x, c) and (not recs or a.lt(c, recs[-1])):
                recs.append(c)
        mapping[x] = tuple((r, bs[j]) for j, r in enumerate(recs))
    return IncreasingMap(Finite(a.sorted(cs)), d, mapping)


# ---------------------------------------------------------------- json

def order_from_json(d: dict) -> LinearOrder:
    kind = d.get("kind")
    if kind == "finite":
        return Finite([tuple(e) if isinstance(e, list) else e for e in d["elements"]])
    if kind == "omega":
        return Omega()
    if kind == "omega_star":
        return OmegaStar()
    if kind == "omega_plus_one":
        return OmegaPlusOne()
    if kind == "sum":
        return Sum(order_from_json(d["left"]), order_from_json(d["right"]))
    if kind == "lex":
        return Lex(order_from_json(d["left"]), order_from_json(d["right"]))
    if kind == "disjunction":
        return disjunction(order_from_json(d["left"]), order_from_json(d["right"]))
    raise StructuralError(f"cannot rebuild order of kind {kind!r} from JSON")


def parse_order(text: str) -> LinearOrder:
    """Short names used on the command line: fin:N, omega, omega_star."""
    text = text.strip()
    if text.startswith("fin:"):
        try:
            n = int(text[4:])
        except ValueError:
            raise StructuralError(f"bad order text {text!r}")
        if n < 0:
            raise StructuralError(f"bad order text {text!r}")
        return fin(n)
    if text == "omega":
        return Omega()
    if text in ("omega_star", "omegastar"):
        return OmegaStar()
    raise StructuralError(f"bad order text {text!r}")
