"""Prequasidendroids: trees of finite sequences over terms and ordinal
parameters, presented once at omega and instantiated elsewhere by collapse.

Atoms are pairs ``("t", x)`` for a term x and ``("p", xi)`` for a parameter
xi.  A sequence is a tuple of atoms.  A prequasidendroid object carries the
membership test of its omega presentation and a hull test valid at any
parameter order; ``View`` objects are the alpha-presentations obtained by
instantiation and mutilation.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Optional

from .dilator import LawReport, Predilator
from .errors import CapabilityError, DomainError, StructuralError
from .order import (IncreasingMap, LinearOrder, Omega, fin, increasing_maps,
                    kb_compare, kb_linearize, lazy_tree_order, reverse)


def T(x):
    return ("t", x)


def P(xi):
    return ("p", xi)


def is_param(a) -> bool:
    return a[0] == "p"


def occ(seq) -> set:
    return {a[1] for a in seq if a[0] == "p"}


def relabel(seq, f) -> tuple:
    """m_f: keep terms, send parameter xi to f(xi)."""
    return tuple(("p", f(a[1])) if a[0] == "p" else a for a in seq)


def collapse(seq, order: Optional[LinearOrder] = None) -> tuple:
    """Replace the k-th smallest parameter by k."""
    ps = list(occ(seq))
    ps = order.sorted(ps) if order is not None else sorted(ps)
    rank = {p: i for i, p in enumerate(ps)}
    return relabel(seq, rank.__getitem__)


def check_atoms(seq, term_order: LinearOrder, alpha: LinearOrder):
    for a in seq:
        if not (isinstance(a, tuple) and len(a) == 2 and a[0] in ("t", "p")):
            raise StructuralError(f"bad atom {a!r}")
        (term_order if a[0] == "t" else alpha).check(a[1])


def atom_compare(term_order: LinearOrder, alpha: LinearOrder):
    def cmp(a, b):
        if a[0] != b[0]:
            return -1 if a[0] == "t" else 1
        return (term_order if a[0] == "t" else alpha).compare(a[1], b[1])
    return cmp


class View:
    """An alpha-prequasidendroid given by a membership predicate.

    ``hull`` and ``children`` are optional; without them only membership
    questions can be asked.
    """

    def __init__(self, alpha: LinearOrder, term_order: LinearOrder, member: Callable,
                 hull: Optional[Callable] = None, children: Optional[Callable] = None,
                 name: str = "view"):
        self.alpha = alpha
        self.term_order = term_order
        self._member = member
        self._hull = hull
        self._children = children
        self.name = name

    def member(self, seq) -> bool:
        return bool(self._member(tuple(seq)))

    def in_hull(self, seq) -> bool:
        if self._hull is None:
            raise CapabilityError(f"{self.name} has no hull test")
        return bool(self._hull(tuple(seq)))

    def children(self, seq, breadth: int = 64) -> list:
        if self._children is None:
            raise CapabilityError(f"{self.name} has no child enumerator")
        return self._children(tuple(seq), breadth)

    def hull_nodes(self, max_nodes: int = 100_000, breadth: int = 64) -> list:
        out = []
        stack = [()]
        while stack:
            s = stack.pop()
            out.append(s)
            if len(out) > max_nodes:
                raise CapabilityError("hull exceeds node budget")
            stack.extend(s + (a,) for a in reversed(self.children(s, breadth)))
        return out


class Prequasidendroid:
    """An omega-presented prequasidendroid.

    ``member_omega`` decides membership in the omega presentation.
    ``hull_pattern(c)`` decides whether the collapsed sequence c is the
    collapse of some node of the omega hull; the hull at alpha is the set of
    sequences whose collapse passes, which makes it a functor in alpha.
    ``children_at(alpha, seq, breadth)`` optionally lists the atoms that may
    follow a hull node; otherwise ``terms`` (a finite list) and the first
    ``breadth`` parameters are tried.
    """

    def __init__(self, term_order: LinearOrder, member_omega: Callable,
                 hull_pattern: Callable, name: str = "dendroid",
                 terms: Optional[list] = None,
                 children_at: Optional[Callable] = None):
        self.term_order = term_order
        self.member_omega = member_omega
        self.hull_pattern = hull_pattern
        self.name = name
        self.terms = terms
        self._children_at = children_at

    def member_instantiated(self, alpha: LinearOrder, seq) -> bool:
        seq = tuple(seq)
        check_atoms(seq, self.term_order, alpha)
        return bool(self.member_omega(collapse(seq, alpha)))

    def in_hull(self, alpha: LinearOrder, seq) -> bool:
        seq = tuple(seq)
        check_atoms(seq, self.term_order, alpha)
        return bool(self.hull_pattern(collapse(seq, alpha)))

    def children(self, alpha: LinearOrder, seq, breadth: int = 64) -> list:
        seq = tuple(seq)
        if self._children_at is not None:
            return self._children_at(alpha, seq, breadth)
        if self.terms is None:
            raise CapabilityError(f"{self.name} has no child enumerator")
        params = alpha.window(alpha.size if alpha.is_finite else breadth)
        cands = [T(x) for x in self.terms] + [P(x) for x in params]
        return [a for a in cands if self.hull_pattern(collapse(seq + (a,), alpha))][:breadth]

    def at(self, alpha: LinearOrder) -> View:
        return View(alpha, self.term_order,
                    lambda s: self.member_instantiated(alpha, s),
                    lambda s: self.in_hull(alpha, s),
                    lambda s, b: self.children(alpha, s, b),
                    name=f"{self.name}@{alpha.kind}")

    def omega_view(self) -> View:
        """The omega presentation itself, without collapsing."""
        om = Omega()
        return View(om, self.term_order, self.member_omega,
                    lambda s: self.in_hull(om, s),
                    lambda s, b: self.children(om, s, b), name=f"{self.name}@omega")


# ---------------------------------------------------------------- operations

def mutilate(D: View, f: IncreasingMap) -> View:
    """^f D: sigma belongs iff m_f(sigma) belongs to D."""
    fn = f.mapping.__getitem__ if f.mapping is not None else f
    return View(f.domain, D.term_order, lambda s: D.member(relabel(s, fn)),
                name=f"mutilate({D.name})")


def instantiate(D: View, beta: LinearOrder) -> View:
    """D_beta = { m_g(sigma) : sigma in D, g: Occ(sigma) -> beta increasing }.

    Exhaustive over the placements of Occ(s) into D's parameter order, which
    must therefore be finite.
    """
    if not D.alpha.is_finite:
        raise CapabilityError("exhaustive instantiation needs a finite parameter order")
    src = D.alpha.window(D.alpha.size)

    def member(s):
        ps = beta.sorted(occ(s))
        for combo in itertools.combinations(src, len(ps)):
            h = dict(zip(ps, combo))
            if D.member(relabel(s, h.__getitem__)):
                return True
        return False

    return View(beta, D.term_order, member, name=f"instantiate({D.name})")


# ---------------------------------------------------------------- pattern dendroids

class PatternDendroid(Prequasidendroid):
    """Membership depends only on the collapse of a sequence, read off a finite
    tree of collapsed patterns.  Homogeneous by construction."""

    def __init__(self, nodes: Iterable[tuple], terms: list, name: str = "pattern",
                 reject: Optional[Callable] = None):
        self.nodes = set(nodes)
        for s in self.nodes:
            if collapse(s) != s:
                raise StructuralError(f"pattern {s!r} is not collapsed")
            if s and collapse(s[:-1]) not in self.nodes:
                raise StructuralError("pattern tree is not prefix-closed")
        parents = {collapse(s[:-1]) for s in self.nodes if s}
        self.leaves = {s for s in self.nodes if s not in parents}
        self.reject = reject
        super().__init__(Omega(), self._member, self.nodes.__contains__, name=name,
                         terms=list(terms))

    def _member(self, s):
        if self.reject is not None and self.reject(s):
            return False
        return collapse(s) in self.leaves

    def to_json(self) -> dict:
        return {"kind": "pattern", "terms": self.terms,
                "nodes": sorted([seq_to_json(s) for s in self.nodes], key=repr)}


def _child_patterns(node: tuple, rng: random.Random, terms: list) -> list:
    k = len(occ(node))
    if rng.random() < 0.5 and terms:
        chosen = [x for x in terms if rng.random() < 0.6] or [rng.choice(terms)]
        return [node + (T(x),) for x in chosen]
    out = []
    for slot in range(2 * k + 1):
        if rng.random() < 0.4:
            continue
        if slot % 2 == 1:
            out.append(node + (P(slot // 2),))
        else:
            j = slot // 2
            shifted = relabel(node, lambda p: p + 1 if p >= j else p)
            out.append(shifted + (P(j),))
    if not out:
        out.append(node + (P(k),))
    return out


def random_pattern_dendroid(rng: random.Random, terms=(0, 1), max_depth: int = 3,
                            leaf_prob: float = 0.3) -> PatternDendroid:
    """A random homogeneous dendroid with finitely many term atoms."""
    terms = list(terms)
    nodes = {()}
    frontier = [()]
    while frontier:
        s = frontier.pop()
        if len(s) >= max_depth or (s and rng.random() < leaf_prob):
            continue
        for c in _child_patterns(s, rng, terms):
            if c not in nodes:
                nodes.add(c)
                frontier.append(c)
    return PatternDendroid(nodes, terms, name="random")


def inhomogeneous_mutant(D: PatternDendroid) -> Prequasidendroid:
    """Same patterns, but members whose first parameter is odd are dropped,
    and the one-atom sequence <xi> is a member exactly when xi is odd.  The
    second defect makes the mutant inhomogeneous even when D has no
    parameters at all."""

    def bad(s):
        ps = [a[1] for a in s if a[0] == "p"]
        return bool(ps) and ps[0] % 2 == 1

    def member(s):
        if len(s) == 1 and s[0][0] == "p":
            return s[0][1] % 2 == 1
        return D._member(s) and not bad(s)

    # membership at omega is used as-is, so collapse no longer hides the defect
    return Prequasidendroid(D.term_order, member, D.nodes.__contains__, name="mutant",
                            terms=list(D.terms))


# ---------------------------------------------------------------- laws

def _alphabet(terms, params):
    return [T(x) for x in terms] + [P(x) for x in params]


def _sequences(alphabet, depth, rng, cap):
    allseq = []
    total = sum(len(alphabet) ** k for k in range(depth + 1))
    if total <= cap:
        for k in range(depth + 1):
            allseq.extend(itertools.product(alphabet, repeat=k))
        return [tuple(s) for s in allseq]
    out = {()}
    while len(out) < cap:
        k = rng.randint(1, depth)
        out.add(tuple(rng.choice(alphabet) for _ in range(k)))
    return sorted(out, key=repr)


def check_laws(D: Prequasidendroid, n_max: int = 4, depth: int = 3, seed: int = 0,
               seq_cap: int = 120, term_window: int = 2) -> LawReport:
    """Check the mutilation/instantiation laws on finite samples.

    (a) D_n is contained in ^f((D_n)_m),
    (b) the converse,
    (c) (^f D_m)_m agrees with D_m on sequences with at most n parameters,
    (d) homogeneity: m_f(s) and m_g(s) agree for all f, g: n -> omega.
    Here D_n is the restriction of the omega presentation to parameters < n.
    """
    rng = random.Random(seed)
    rep = LawReport()
    for law in ("a", "b", "c", "d"):
        rep.checked[law] = 0
    terms = D.terms if D.terms is not None else list(D.term_order.elements(term_window))
    terms = terms[:term_window]
    cache = {}

    def mem(s):
        r = cache.get(s)
        if r is None:
            r = cache[s] = bool(D.member_omega(s))
        return r

    orders = [fin(n) for n in range(n_max + 1)]
    restr = [View(orders[n], D.term_order, mem, name=f"D_{n}")
             for n in range(n_max + 1)]
    seqs = {n: _sequences(_alphabet(terms, range(n)), depth, rng, seq_cap)
            for n in range(n_max + 1)}

    for n in range(n_max + 1):
        for m in range(n, n_max + 1):
            inst = instantiate(restr[n], orders[m])
            for f in increasing_maps(orders[n], orders[m]):
                for s in seqs[n]:
                    lhs = restr[n].member(s)
                    rhs = inst.member(relabel(s, f.mapping.__getitem__))
                    ex = {"n": n, "m": m, "f": f.pairs(), "seq": seq_to_json(s)}
                    rep.add("a", ex if lhs and not rhs else None)
                    rep.add("b", ex if rhs and not lhs else None)
                mut = instantiate(mutilate(restr[m], f), orders[m])
                for s in seqs[m]:
                    if len(occ(s)) > n:
                        continue
                    ex = {"n": n, "m": m, "f": f.pairs(), "seq": seq_to_json(s)}
                    rep.add("c", ex if restr[m].member(s) != mut.member(s) else None)

    for n in range(n_max + 1):
        for m in range(n, n_max + 2):
            maps = list(increasing_maps(orders[n], fin(m)))
            for f, g in itertools.combinations(maps, 2):
                for s in seqs[n]:
                    a = mem(relabel(s, f.mapping.__getitem__))
                    b = mem(relabel(s, g.mapping.__getitem__))
                    rep.add("d", None if a == b else
                            {"f": f.pairs(), "g": g.pairs(), "seq": seq_to_json(s)})
    return rep


# ---------------------------------------------------------------- Lin*

def lin_star(D: Prequasidendroid, breadth: int = 64, max_nodes: int = 20_000,
             order_broken: bool = False) -> Predilator:
    """The predilator alpha |-> (hull of D_alpha, Kleene-Brouwer order).

    ``order_broken`` flips every image order; the result stays functorial
    but loses monotonicity.  It exists only as a test mutant.
    """

    def apply(alpha):
        view = D.at(alpha)
        cmp_atom = atom_compare(D.term_order, alpha)
        if alpha.is_finite and D.terms is not None and D._children_at is None:
            nodes = view.hull_nodes(max_nodes, breadth)
            base = _AtomOrder(D.term_order, alpha)
            out = kb_linearize(nodes, base, search="branch")
        else:
            out = lazy_tree_order("lin_star", view.in_hull, cmp_atom,
                                  lambda s: [s + (a,) for a in view.children(s, breadth)],
                                  params={"dendroid": D.name})
        return reverse(out) if order_broken else out

    def map_elem(f, s):
        return relabel(s, f)

    def supp(alpha, s):
        return occ(s)

    return Predilator(f"lin_star({D.name})" + ("!" if order_broken else ""),
                      apply, map_elem, supp)


def _AtomOrder(term_order: LinearOrder, alpha: LinearOrder) -> LinearOrder:
    def contains(a):
        return (isinstance(a, tuple) and len(a) == 2 and
                ((a[0] == "t" and term_order.contains(a[1])) or
                 (a[0] == "p" and alpha.contains(a[1]))))
    return LinearOrder("atoms", contains, atom_compare(term_order, alpha))


def find_branch(D: Prequasidendroid, alpha: LinearOrder, depth: int, breadth: int = 64,
                budget: int = 200_000) -> Optional[tuple]:
    """Leftmost hull node of length ``depth`` by depth-first search."""
    stack = [()]
    spent = 0
    while stack:
        s = stack.pop()
        spent += 1
        if spent > budget:
            return None
        if len(s) == depth:
            return s
        stack.extend(s + (a,) for a in reversed(D.children(alpha, s, breadth)))
    return None


# ---------------------------------------------------------------- json

def seq_to_json(seq) -> list:
    return [{a[0]: a[1]} for a in seq]


def seq_from_json(items) -> tuple:
    out = []
    for it in items:
        if not isinstance(it, dict) or len(it) != 1:
            raise StructuralError(f"bad atom {it!r}")
        (k, v), = it.items()
        if k not in ("t", "p"):
            raise StructuralError(f"bad atom tag {k!r}")
        out.append((k, tuple(v) if isinstance(v, list) else v))
    return tuple(out)


def pattern_from_json(d: dict) -> PatternDendroid:
    if d.get("kind") != "pattern":
        raise StructuralError("only pattern dendroids round-trip through JSON")
    return PatternDendroid([seq_from_json(s) for s in d["nodes"]], d["terms"])
