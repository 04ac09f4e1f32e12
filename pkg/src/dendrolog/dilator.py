"""Predilators presented on finite samples, law checks, traces and a bounded
climax search."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .order import (Finite, IncreasingMap, LinearOrder, fin, find_descending,
                    increasing_maps)


class Predilator:
    """A functor on linear orders with supports.

    ``apply(X)`` gives F(X); ``map_elem(f, s)`` computes F(f)(s) for
    s in F(dom f); ``supp(X, s)`` is the support of s as a subset of X.
    """

    def __init__(self, name: str, apply: Callable[[LinearOrder], LinearOrder],
                 map_elem: Callable[[IncreasingMap, object], object],
                 supp: Callable[[LinearOrder, object], frozenset]):
        self.name = name
        self._apply = apply
        self._map = map_elem
        self._supp = supp

    def apply(self, order: LinearOrder) -> LinearOrder:
        return self._apply(order)

    def map(self, f: IncreasingMap) -> Callable:
        return lambda s: self._map(f, s)

    def supp(self, order: LinearOrder, s) -> frozenset:
        return frozenset(self._supp(order, s))

    def __repr__(self):
        return f"Predilator({self.name})"


def identity() -> Predilator:
    return Predilator("identity", lambda X: X, lambda f, x: f(x), lambda X, x: {x})


def constant(order: LinearOrder) -> Predilator:
    return Predilator(f"constant({order.kind})", lambda X: order, lambda f, x: x,
                      lambda X, x: set())


def sum(*fs: Predilator) -> Predilator:  # noqa: A001 - mirrors the construction's name
    """Ordered sum: elements (i, s) with s in F_i(X)."""

    def apply(X):
        parts = [F.apply(X) for F in fs]

        def contains(z):
            return (isinstance(z, tuple) and len(z) == 2 and isinstance(z[0], int)
                    and 0 <= z[0] < len(parts) and parts[z[0]].contains(z[1]))

        def cmp(a, b):
            if a[0] != b[0]:
                return a[0] - b[0]
            return parts[a[0]].compare(a[1], b[1])

        enum = None
        if all(p.has_enumerator and p.is_finite for p in parts):
            def enum():
                for i, p in enumerate(parts):
                    for x in p.elements():
                        yield (i, x)
        size = None
        if all(p.is_finite for p in parts):
            size = 0
            for p in parts:
                size += p.size
        return LinearOrder("dilator_sum", contains, cmp, enum=enum, size=size)

    return Predilator("sum(" + ",".join(F.name for F in fs) + ")", apply,
                      lambda f, z: (z[0], fs[z[0]].map(f)(z[1])),
                      lambda X, z: fs[z[0]].supp(X, z[1]))


def finite_elements(F: Predilator, X: LinearOrder, limit: int = 10_000) -> list:
    FX = F.apply(X)
    if FX.is_finite:
        return FX.window(FX.size)
    return FX.window(limit)


def trace(F: Predilator, n_max: int) -> list:
    """Pairs (n, s) with s in F(n) and supp(s) = n, by n then the order of F(n)."""
    out = []
    for n in range(n_max + 1):
        X = fin(n)
        for s in finite_elements(F, X):
            if F.supp(X, s) == frozenset(range(n)):
                out.append((n, s))
    return out


@dataclass
class LawReport:
    violations: dict = field(default_factory=dict)
    checked: dict = field(default_factory=dict)

    def add(self, law, example=None):
        self.checked[law] = self.checked.get(law, 0) + 1
        if example is not None:
            self.violations.setdefault(law, []).append(example)

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed(self, law) -> bool:
        return bool(self.violations.get(law))

    def summary(self) -> dict:
        return {law: {"checked": self.checked.get(law, 0),
                      "violations": len(self.violations.get(law, []))}
                for law in sorted(set(self.checked) | set(self.violations))}


LAWS = ("functoriality", "map_increasing", "support", "naturality", "monotonicity")


def check_predilator(F: Predilator, sample_budget: int = 200, seed: int = 0,
                     max_size: int = 4, elem_limit: int = 64) -> LawReport:
    """Check the predilator laws on finite orders 0..max_size and their maps.

    Every triple of sizes and every pair of composable maps is visited in a
    shuffled order; ``sample_budget`` caps the number of map pairs.
    """
    rng = random.Random(seed)
    rep = LawReport()
    for law in LAWS:
        rep.checked[law] = 0
    orders = [fin(n) for n in range(max_size + 1)]
    elems = {n: finite_elements(F, orders[n], elem_limit) for n in range(max_size + 1)}

    # identity and support checks per order
    for n, X in enumerate(orders):
        idm = IncreasingMap.identity(X)
        Fid = F.map(idm)
        for s in elems[n]:
            rep.add("functoriality", None if Fid(s) == s else {"identity": n, "elem": repr(s)})

    triples = [(a, b, c) for a in range(max_size + 1) for b in range(a, max_size + 1)
               for c in range(b, max_size + 1)]
    pairs = []
    for a, b, c in triples:
        for f in increasing_maps(orders[a], orders[b]):
            for g in increasing_maps(orders[b], orders[c]):
                pairs.append((f, g))
    rng.shuffle(pairs)
    pairs = pairs[:sample_budget]

    for f, g in pairs:
        X, Y, Z = f.domain, f.codomain, g.codomain
        FX = F.apply(X)
        FY = F.apply(Y)
        Ff, Fg, Fgf = F.map(f), F.map(g), F.map(g.compose(f))
        img = {}
        for s in elems[X.size]:
            t = Ff(s)
            img[t] = s
            rep.add("functoriality",
                    None if Fg(t) == Fgf(s) else {"f": f.pairs(), "g": g.pairs(), "elem": repr(s)})
            want = frozenset(f(x) for x in F.supp(X, s))
            rep.add("naturality",
                    None if F.supp(Y, t) == want else {"f": f.pairs(), "elem": repr(s)})
        xs = elems[X.size]
        bad = None
        for s, u in zip(xs, xs[1:]):
            if not FY.lt(Ff(s), Ff(u)):
                bad = {"f": f.pairs(), "elems": [repr(s), repr(u)]}
                break
        rep.add("map_increasing", bad)
        ran = set(f.mapping.values())
        bad = None
        for t in elems[Y.size]:
            if F.supp(Y, t) <= ran and t not in img:
                bad = {"f": f.pairs(), "elem": repr(t)}
                break
        rep.add("support", bad)

    # monotonicity: f <= g pointwise implies F(f) <= F(g) pointwise
    mono = []
    for a in range(max_size + 1):
        for b in range(a, max_size + 1):
            maps = list(increasing_maps(orders[a], orders[b]))
            for f in maps:
                for g in maps:
                    if all(orders[b].le(f(x), g(x)) for x in orders[a].elements()):
                        mono.append((f, g))
    rng.shuffle(mono)
    for f, g in mono[:sample_budget]:
        FY = F.apply(f.codomain)
        Ff, Fg = F.map(f), F.map(g)
        bad = None
        for s in elems[f.domain.size]:
            if not FY.le(Ff(s), Fg(s)):
                bad = {"f": f.pairs(), "g": g.pairs(), "elem": repr(s)}
                break
        rep.add("monotonicity", bad)
    return rep


def climax_bounded(F: Predilator, probes, depth: int):
    """First probe whose image has a descending sequence of length ``depth``,
    with the witness; None if no probe yields one."""
    for i, p in enumerate(probes):
        w = find_descending(F.apply(p), depth)
        if w is not None:
            return i, w
    return None
