"""Richterian notation systems computed with bounds and three truth values.

Codes: 0 is the zero notation, and for n >= 2 the pair (t, r) = unpair(n - 2)
gives sup (t = 0, r = pair(a, b)), the disjunction notation (t = 1) and the
admissible step (t = 2, r = x).  Everything else, 1 included, is ``Other``.

The function part b of sup(a, b) is the oracle machine code with index b,
run on x with the oracle X_{<a}.  Hierarchy levels are computed lazily per
code, so codes above the universe bound can still be queried directly.
Universally quantified clauses are checked for x below the quantifier bound
and by a budgeted evaluation; anything that cannot be resolved is UNKNOWN.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .coding import pair, unpair
from . import oracle as orc
from .oracle import (ADD, AND, LEQ, MUL, NSG, SG, Apply, BoundedMu, Compose,
                     Const, Halts, Pair, PartialOracle, Proj, Query, SmnIdx,
                     Undecided, Value, fixed_point, index, smn)

IN = "In"
OUT = "Out"
UNKNOWN = "Unknown"


def t_not(v):
    return {IN: OUT, OUT: IN}.get(v, UNKNOWN)


def t_and(*vs):
    if OUT in vs:
        return OUT
    return IN if all(v == IN for v in vs) else UNKNOWN


def t_or(*vs):
    if IN in vs:
        return IN
    return OUT if all(v == OUT for v in vs) else UNKNOWN


@dataclass(frozen=True)
class Bounds:
    universe: int = 64
    budget: int = 200
    qbound: int = 16


# ---------------------------------------------------------------- codes

def sup(a: int, b: int) -> int:
    return 2 + pair(0, pair(a, b))


def vee(a: int, b: int) -> int:
    return 2 + pair(1, pair(a, b))


def adm(x: int) -> int:
    return 2 + pair(2, x)


def view(n: int) -> tuple:
    """("zero",) | ("sup", a, b) | ("vee", a, b) | ("adm", x) | ("other", n)."""
    if n == 0:
        return ("zero",)
    if n == 1:
        return ("other", 1)
    t, r = unpair(n - 2)
    if t == 0:
        return ("sup",) + unpair(r)
    if t == 1:
        return ("vee",) + unpair(r)
    if t == 2:
        return ("adm", r)
    return ("other", n)


def from_view(v: tuple) -> int:
    tag = v[0]
    if tag == "zero":
        return 0
    if tag == "sup":
        return sup(v[1], v[2])
    if tag == "vee":
        return vee(v[1], v[2])
    if tag == "adm":
        return adm(v[1])
    return v[1]


# The identity gadget: x is sent to itself when it lies in the oracle set,
# otherwise to 0.  Its values always fall inside X_{<a} or at 0.
ID_FN = Compose(MUL, [Proj(0, 1), Query(Proj(0, 1))])
ID_CODE = index(ID_FN)


def const_code(c: int) -> int:
    return index(Const(c, 1))


# ---------------------------------------------------------------- pair sets

class PairSet:
    """A lazily evaluated tri-state set of pairs <x, y>."""

    def __init__(self, has: Callable[[int, int], str], name: str = "X"):
        self._has = has
        self._memo: Dict[tuple, str] = {}
        self.name = name
        self.saturation: Dict[tuple, str] = {}

    def has(self, x: int, y: int) -> str:
        k = (x, y)
        r = self._memo.get(k)
        if r is None:
            r = self._memo[k] = self._has(x, y)
        return r

    def fld(self, x: int) -> str:
        """x in F(X), i.e. <x, x> in X."""
        return self.has(x, x)

    def below(self, a: int, y: int) -> str:
        """y in X_{<a}."""
        return t_and(self.has(y, a), t_not(self.has(a, y)))

    def field(self, x: int, bounds: Bounds) -> str:
        """x in field(X), searching partners below the universe bound."""
        vals = [self.has(x, x)]
        for z in range(bounds.universe):
            vals.append(self.has(x, z))
            vals.append(self.has(z, x))
            if IN in vals:
                return IN
        return t_or(*vals)


def empty_pairs() -> PairSet:
    return PairSet(lambda x, y: OUT, "empty")


def pairs_from_dict(d: dict, default: str = OUT) -> PairSet:
    return PairSet(lambda x, y: d.get((x, y), default), "dict")


# ---------------------------------------------------------------- operators

def _run_fn(b: int, x: int, X: PairSet, a: int, bounds: Bounds):
    """Evaluate [b](x, X_{<a}); returns (status, value)."""
    try:
        code = orc.decode(b)
    except orc.StructuralError:
        return OUT, None

    def ask(y):
        v = X.below(a, y)
        return {IN: 1, OUT: 0}.get(v)

    try:
        r = orc.evaluate(code, [x], PartialOracle(fn=ask), bounds.budget)
    except orc.StructuralError:
        return OUT, None
    if isinstance(r, Value):
        return IN, r.value
    return UNKNOWN, None


def richter_member(X: PairSet, n: int, bounds: Bounds) -> str:
    v = view(n)
    if v[0] == "zero":
        return IN
    if v[0] == "sup":
        a, b = v[1], v[2]
        fa = X.fld(a)
        if fa == OUT:
            return OUT
        vals = [fa]
        for x in range(bounds.qbound):
            st, val = _run_fn(b, x, X, a, bounds)
            if st == OUT:
                return OUT
            if st == UNKNOWN:
                vals.append(UNKNOWN)
                continue
            m = X.fld(val)
            if m == OUT:
                return OUT
            vals.append(m)
        return t_and(*vals)
    if v[0] == "vee":
        return t_or(X.fld(v[1]), X.fld(v[2]))
    return OUT


def richter_step(X: PairSet, bounds: Bounds = Bounds()) -> dict:
    """Tri-state membership in the Richter operator over codes < universe."""
    return {n: richter_member(X, n, bounds) for n in range(bounds.universe)}


def saturated(X: PairSet, bounds: Bounds) -> str:
    """Is R(X) contained in field(X), judged on codes below the universe bound?"""
    key = (bounds.universe, bounds.budget, bounds.qbound)
    if key in X.saturation:
        return X.saturation[key]
    vals = []
    for n in range(bounds.universe):
        r = richter_member(X, n, bounds)
        if r == OUT:
            continue
        f = X.field(n, bounds)
        vals.append(t_or(t_not(r), f))
        if vals[-1] == OUT:
            break
    res = t_and(*vals)
    X.saturation[key] = res
    return res


def theta_member(op: str, X: PairSet, n: int, bounds: Bounds, x: Optional[int] = None) -> str:
    """Membership of n in Theta(X) for Theta one of R, J, Jx."""
    r = richter_member(X, n, bounds)
    if op == "R" or r == IN:
        return r
    v = view(n)
    extra = [r]
    if v[0] == "adm" or op == "Jx":
        sat = saturated(X, bounds)
        if v[0] == "adm":
            extra.append(t_and(sat, X.fld(v[1])))
        if op == "Jx":
            if x is None:
                raise ValueError("J_x needs a parameter")
            extra.append(t_and(sat, X.field(x, bounds)))
    return t_or(*extra)


def theta_le_member(op: str, X: PairSet, u: int, v: int, bounds: Bounds,
                    x: Optional[int] = None) -> str:
    tv = theta_member(op, X, v, bounds, x)
    new_v = t_and(tv, t_not(X.fld(v)))
    first = t_and(X.fld(u), new_v)
    second = t_and(theta_member(op, X, u, bounds, x), t_not(X.fld(u)), new_v)
    return t_or(first, second)


def theta_le_step(X: PairSet, op: str = "J", bounds: Bounds = Bounds(),
                  x: Optional[int] = None) -> PairSet:
    return PairSet(lambda u, v: theta_le_member(op, X, u, v, bounds, x), f"theta_le({X.name})")


# ---------------------------------------------------------------- hierarchies

class Hierarchy:
    """M_0 = empty, M_{L+1} = M_L union Theta(M*_L), computed on demand."""

    def __init__(self, op: str = "J", bounds: Bounds = Bounds(), x: Optional[int] = None):
        if op not in ("R", "J", "Jx"):
            raise ValueError(f"unknown operator {op!r}")
        if op == "Jx" and x is None:
            raise ValueError("J_x needs a parameter")
        self.op = op
        self.bounds = bounds
        self.x = x
        self._mem: Dict[tuple, str] = {}
        self._star: Dict[int, PairSet] = {}

    def member(self, n: int, L: int) -> str:
        if L <= 0:
            return OUT
        k = (n, L)
        r = self._mem.get(k)
        if r is None:
            prev = self.member(n, L - 1)
            if prev == IN:
                r = IN
            else:
                r = t_or(prev, theta_member(self.op, self.mstar(L - 1), n, self.bounds, self.x))
            self._mem[k] = r
        return r

    def norm(self, n: int, L: int):
        """(status, value): ("known", b) with b the least b such that n is
        in M_{b+1}; ("absent", None) if n is Out of M_L; else unknown."""
        for b in range(L):
            m = self.member(n, b + 1)
            if m == IN:
                return ("known", b)
            if m == UNKNOWN:
                return ("unknown", None)
        return ("absent", None)

    def mstar(self, L: int) -> PairSet:
        if L not in self._star:
            def has(u, v, L=L):
                mu, mv = self.member(u, L), self.member(v, L)
                if OUT in (mu, mv):
                    return OUT
                if mu == mv == IN:
                    su, nu = self.norm(u, L)
                    sv, nv = self.norm(v, L)
                    if su == sv == "known":
                        return IN if nu <= nv else OUT
                return UNKNOWN
            self._star[L] = PairSet(has, f"M*_{L}")
        return self._star[L]

    def level(self, L: int) -> dict:
        out = {IN: [], OUT: [], UNKNOWN: []}
        for n in range(self.bounds.universe):
            out[self.member(n, L)].append(n)
        return {"in": out[IN], "out": out[OUT], "unknown": out[UNKNOWN]}


def m_hierarchy(op: str = "J", levels: int = 4, bounds: Bounds = Bounds(),
                x: Optional[int] = None) -> list:
    """Levels M_0, ..., M_levels over the universe, as dicts in/out/unknown."""
    h = Hierarchy(op, bounds, x)
    return [h.level(L) for L in range(levels + 1)]


def pair_hierarchy(op: str = "J", levels: int = 4, bounds: Bounds = Bounds(),
                   x: Optional[int] = None) -> list:
    """Pair-level iterates P_L = union over b < L of Theta_le(P_b)."""
    steps = []
    out = [empty_pairs()]
    for L in range(1, levels + 1):
        steps.append(theta_le_step(out[-1], op, bounds, x))
        parts = list(steps)
        out.append(PairSet(lambda u, v, parts=parts: t_or(*[p.has(u, v) for p in parts]),
                           f"P_{L}"))
    return out


# ---------------------------------------------------------------- exact chains

def check_exact_chain(gamma, chain: dict, op: Callable[[frozenset], frozenset]) -> dict:
    """Verify (X)_xi = union_{eta < xi} op((X)_eta), strict growth below the
    top element mu, and (X)_mu = (X)_{mu-}."""
    elems = gamma.window(gamma.size)
    violations = []
    if not elems:
        return {"ok": True, "violations": []}
    for e in elems:
        if e not in chain:
            violations.append({"law": "defined", "at": e})
    if violations:
        return {"ok": False, "violations": violations}
    sets = {e: frozenset(chain[e]) for e in elems}
    for i, xi in enumerate(elems):
        want = frozenset().union(*[op(sets[eta]) for eta in elems[:i]])
        if sets[xi] != want:
            violations.append({"law": "recursion", "at": xi})
    mu = elems[-1]
    below = elems[:-1]
    for i, eta in enumerate(below):
        for xi in below[i + 1:]:
            if not sets[eta] < sets[xi]:
                violations.append({"law": "strict_growth", "at": [eta, xi]})
    if len(elems) >= 2 and sets[mu] != sets[elems[-2]]:
        violations.append({"law": "stabilization", "at": mu})
    return {"ok": not violations, "violations": violations}


def canonical_chain(gamma, op) -> dict:
    elems = gamma.window(gamma.size)
    chain = {}
    for i, xi in enumerate(elems):
        chain[xi] = frozenset().union(*[op(chain[eta]) for eta in elems[:i]])
    return chain


# ---------------------------------------------------------------- gadgets

def _c(f, *gs):
    return Compose(f, list(gs))


# G(a, x, t) = a if {x}(x) does not halt within t steps, else 1
_TJ_CASE = _c(ADD,
              _c(MUL, Proj(0, 3), _c(NSG, Halts(Proj(1, 3), Proj(1, 3), Proj(2, 3)))),
              Halts(Proj(1, 3), Proj(1, 3), Proj(2, 3)))


def tj_code(a: int, x: int) -> orc.Code:
    """e(a, x): t |-> a unless {x}(x) halts within t steps, in which case 1."""
    return smn(_TJ_CASE, [a, x])


def tj_reduction(a: int, x: int) -> int:
    """sup(a, e(a, x)); it belongs to the hierarchy only if x is outside the jump."""
    return sup(a, index(tj_code(a, x)))


def mstar_test(u: int, v: int, level: int, hierarchy: Optional[Hierarchy] = None) -> str:
    """u, v in M_L and [sup(u, id) in M_L implies sup(u, c_v) in M_L]."""
    h = hierarchy or Hierarchy("J")
    L = level
    return t_and(h.member(u, L), h.member(v, L),
                 t_or(t_not(h.member(sup(u, ID_CODE), L)),
                      h.member(sup(u, const_code(v)), L)))


# unpairing inside the code language, by bounded search
_TRI = _c(orc.PrimRec(Const(0, 0), _c(ADD, Proj(1, 2), _c(orc.Succ(), Proj(0, 2)))), Proj(0, 1))
# w(z) = least w < z+1 with T(w+1) > z
_W = _c(BoundedMu(_c(LEQ, _c(_TRI, _c(orc.Succ(), Proj(1, 2))), Proj(0, 2))),
        Proj(0, 1), _c(orc.Succ(), Proj(0, 1)))
UNPAIR_R = _c(orc.MONUS, Proj(0, 1), _c(_TRI, _W))
UNPAIR_L = _c(orc.MONUS, _W, UNPAIR_R)


def _h_code() -> orc.Code:
    """H(e, n, z) = 0 if [e] vanishes at z, <u, n> and <v, n> (z = <u, v>), else 1."""
    e, n, z = Proj(0, 3), Proj(1, 3), Proj(2, 3)
    u, v = _c(UNPAIR_L, z), _c(UNPAIR_R, z)
    ev = lambda arg: Apply(e, [arg])
    total = _c(ADD, _c(ADD, ev(z), ev(Pair(u, n))), ev(Pair(v, n)))
    return _c(SG, total)


H_CODE = _h_code()


def h_index(e: int, n: int) -> int:
    """Index of the restriction of the order coded by e to the part below n."""
    return index(smn(H_CODE, [e, n]))


def hyperjump_reduction_code(x: int) -> orc.Code:
    """A code f with {f}(e) = sup(x, index of n |-> {f}(h(e, n))).

    Built with the recursion theorem: k(m) is the index of
    e |-> sup(x, index of n |-> {m}(h(e, n))), and f is its fixed point.
    """
    # G(m, e, n) = {m}(h(e, n))
    g = Apply(Proj(0, 3), [SmnIdx(SmnIdx(Const(index(H_CODE), 3), Proj(1, 3)), Proj(2, 3))])
    # C(m, e) = sup(x, index of n |-> G(m, e, n))
    b = SmnIdx(SmnIdx(Const(index(g), 2), Proj(0, 2)), Proj(1, 2))
    # ADD recurses on its second argument, so the small summand goes last
    c = _c(ADD, Pair(Const(0, 2), Pair(Const(x, 2), b)), Const(2, 2))
    k = SmnIdx(Const(index(c), 1), Proj(0, 1))
    return fixed_point(k)
