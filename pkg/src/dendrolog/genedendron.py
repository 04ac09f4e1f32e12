"""Genedendrons: a prequasidendroid with a functorial extraction of finite
partial reals from its finite branches.

Two constructions are provided: the Shoenfield-style tree built from a
decidable kernel tree over triples of sequences, and the genedendron read
off the generated preproof of 0=0 |- S0=0 in the inductive system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .dendroid import (Prequasidendroid, collapse, find_branch, lin_star, occ,
                       check_atoms)
from .dilator import climax_bounded
from .errors import (BranchInvalidError, BudgetError, CapabilityError, StructuralError)
from .order import LinearOrder, Lex, Omega, fin

from .betalogic import engine as eng
from .betalogic import syntax as sx
from .betalogic.semantics import standard


class GeneDendron:
    """``dend`` with ``extract_omega`` reading a finite partial function off a
    collapsed hull node; ``extract(alpha, seq)`` collapses first."""

    def __init__(self, dend: Prequasidendroid, extract_omega: Callable[[tuple], dict],
                 generates_label: str, branch_search: Optional[Callable] = None):
        self.dend = dend
        self.extract_omega = extract_omega
        self.generates_label = generates_label
        self._branch_search = branch_search

    def extract(self, alpha: LinearOrder, seq) -> dict:
        seq = tuple(seq)
        check_atoms(seq, self.dend.term_order, alpha)
        return dict(self.extract_omega(collapse(seq, alpha)))

    def branch(self, alpha: LinearOrder, depth: int, breadth: int = 8,
               budget: int = 200_000) -> Optional[tuple]:
        if self._branch_search is not None:
            return self._branch_search(alpha, depth, breadth, budget)
        return find_branch(self.dend, alpha, depth, breadth, budget)

    def __repr__(self):
        return f"GeneDendron({self.dend.name}: {self.generates_label})"


# ---------------------------------------------------------------- kernels

class KernelTree:
    """A decidable tree of triples (z, y, x) of equal-length sequences."""

    def __init__(self, contains: Callable[[tuple, tuple, tuple], bool], name: str,
                 real: Optional[Callable[[int], int]] = None):
        self._contains = contains
        self.name = name
        self.real = real          # the intended real, when known (tests only)

    def contains(self, z, y, x) -> bool:
        z, y, x = tuple(z), tuple(y), tuple(x)
        if not len(z) == len(y) == len(x):
            return False
        return bool(self._contains(z, y, x))

    def section(self, y, x) -> Callable[[tuple], bool]:
        """s -> (s, y|s, x|s) in T."""
        y, x = tuple(y), tuple(x)
        return lambda s: len(s) <= len(y) and self.contains(s, y[:len(s)], x[:len(s)])

    def validate(self, length: int = 3, width: int = 2):
        """Check closure under initial segments on all triples over range(width)."""
        vals = range(width)
        for n in range(1, length + 1):
            for z in itertools.product(vals, repeat=n):
                for y in itertools.product(vals, repeat=n):
                    for x in itertools.product(vals, repeat=n):
                        if self.contains(z, y, x) and not self.contains(z[:-1], y[:-1], x[:-1]):
                            raise StructuralError(
                                f"kernel {self.name} is not a tree at {(z, y, x)}")
        return self


def evens(i: int) -> int:
    return 1 if i % 2 == 0 else 0


def evens_kernel(slack: int = 8) -> KernelTree:
    """x is the set of even numbers, witnessed by z(0) + slack bits.

    The section at (y, x) is {z : |z| <= z(0) + slack} plus every z once x
    disagrees with the evens below z(0) + slack + 1; it is well-founded
    exactly when x is the evens set.
    """

    def contains(z, y, x):
        n = len(z)
        if n == 0:
            return True
        k = z[0] + slack + 1
        if n < k:
            return True
        return any(x[i] != evens(i) for i in range(k))

    return KernelTree(contains, f"evens(slack={slack})", real=evens)


def empty_kernel() -> KernelTree:
    return KernelTree(lambda z, y, x: False, "empty", real=None)


KERNELS = {"evens": evens_kernel, "empty": lambda slack=8: empty_kernel()}


# ---------------------------------------------------------------- enumeration of N^{<omega}

def _seq_key(s):
    return (len(s) + 64 * sum(s), s)


@lru_cache(maxsize=None)
def canonical_sequences(n: int) -> tuple:
    """s_0, ..., s_{n-1}: ordered by |s| + 64*sum(s), then lexicographically."""
    out = []
    w = 0
    while len(out) < n:
        # all s with |s| + 64*sum(s) == w
        batch = []
        for total in range(w // 64 + 1):
            length = w - 64 * total
            if length < 0:
                continue
            if length == 0:
                if total == 0:
                    batch.append(())
                continue
            for cut in itertools.combinations(range(total + length - 1), length - 1):
                parts, prev = [], -1
                for c in cut + (total + length - 1,):
                    parts.append(c - prev - 1)
                    prev = c
                batch.append(tuple(parts))
        out.extend(sorted(batch))
        w += 1
    return tuple(out[:n])


def _proper_ext(a, b) -> bool:
    return len(a) > len(b) and a[:len(b)] == b


# ---------------------------------------------------------------- Shoenfield

def t_hat(T: KernelTree, ts, us, zetas, cmp: Callable) -> bool:
    """(t, u, zeta) in T-hat: whenever s_i lies in the (t, u)-section and
    properly extends s_j, zeta_i < zeta_j.  Needs the root of T."""
    m = len(ts)
    if not (len(us) == m == len(zetas)):
        return False
    if m and not T.contains((), (), ()):
        return False
    ss = canonical_sequences(m)
    inside = T.section(ts, us)
    mem = [inside(s) for s in ss]
    for i in range(m):
        if not mem[i]:
            continue
        for j in range(m):
            if _proper_ext(ss[i], ss[j]) and not cmp(zetas[i], zetas[j]) < 0:
                return False
    return True


def _split_pairs(c):
    """((t,u) list, zeta list, trailing pair or None) of an interleaved sequence."""
    terms = [a[1] for a in c[0::2]]
    params = [a[1] for a in c[1::2]]
    if any(a[0] != "t" for a in c[0::2]) or any(a[0] != "p" for a in c[1::2]):
        return None
    tail = terms[len(params)] if len(terms) > len(params) else None
    return terms[:len(params)], params, tail


def shoenfield(T: KernelTree, t_range: int = 1, u_range: int = 2) -> GeneDendron:
    """The genedendron of interleaved T-hat triples with a trailing (0, 0).

    Children of a hull node list the pairs (t, u) with t < t_range and
    u < u_range and then the parameters of alpha, largest first, so that
    the leftmost search tries the most room first.
    """
    term_order = Lex(Omega(), Omega())
    icmp = lambda a, b: (a > b) - (a < b)

    @lru_cache(maxsize=200_000)
    def in_hat(pairs, zetas):
        return t_hat(T, [p[0] for p in pairs], [p[1] for p in pairs], zetas, icmp)

    def member(c):
        if len(c) % 2 == 0:
            return False
        sp = _split_pairs(c)
        if sp is None:
            return False
        pairs, zetas, tail = sp
        return tail == (0, 0) and in_hat(tuple(pairs), tuple(zetas))

    def hull(c):
        sp = _split_pairs(c)
        if sp is None:
            return False
        pairs, zetas, tail = sp
        if not in_hat(tuple(pairs), tuple(zetas)):
            return False
        if tail is None or tail == (0, 0):
            return True
        # some zeta at omega: any gap or any existing rank
        doubled = tuple(2 * z + 1 for z in zetas)
        for cand in range(0, 2 * len(zetas) + 2):
            if in_hat(tuple(pairs) + (tail,), doubled + (cand,)):
                return True
        return False

    def children_at(alpha, seq, breadth):
        c = collapse(seq, alpha)
        if not hull(c):
            return []
        if len(seq) % 2 == 0:
            cands = [("t", (t, u)) for t in range(t_range) for u in range(u_range)]
        else:
            xs = alpha.window(alpha.size if alpha.is_finite else breadth)
            cands = [("p", x) for x in reversed(xs)]
        out = [a for a in cands if hull(collapse(seq + (a,), alpha))]
        return out if len(seq) % 2 == 0 else out[:breadth]

    D = Prequasidendroid(term_order, member, hull, name=f"shoenfield({T.name})",
                         children_at=children_at)

    def extract(c):
        return {i: a[1][1] for i, a in enumerate(c[0::2])}

    return GeneDendron(D, extract, f"the real of kernel {T.name}")


# ---------------------------------------------------------------- HJ

def hj_genedendron(P="(X x)", breadth: int = 4) -> GeneDendron:
    """Den of the preproof of 0=0 |- S0=0 in the inductive system for P.

    Extraction reads Ibar(S^n 0): antecedent gives (n, 1), succedent (n, 0).
    """
    system = eng.inductive(P)
    root = eng.parse_root("(= 0 0) |- (= (S 0) 0)")
    pi = eng.generate(system, root, Omega())
    D = eng.den(pi, breadth=breadth)

    def bits_of(node) -> dict:
        out = {}
        for side, bit in ((node.ante, 1), (node.succ, 0)):
            for A in side:
                if A[0] == "Ibar":
                    n = sx.numeral_value(A[1])
                    if n is None:
                        continue
                    if out.get(n, bit) != bit:
                        raise BranchInvalidError(f"Ibar(S^{n} 0) on both sides")
                    out[n] = bit
        return out

    def extract(c):
        node = pi.label(c[0::2])
        if node is None:
            raise StructuralError("not a hull node")
        return bits_of(node)

    guides = {}

    def search(alpha, depth, b, budget):
        key = repr(alpha.to_json())
        if key not in guides:
            guides[key] = standard(alpha, 8, system.template) if alpha.is_finite else None
        piA = eng.generate(system, root, alpha)
        steps = (depth + 1) // 2
        try:
            br = eng.find_open_branch(piA, steps, b, budget, guide=guides[key])
        except BudgetError:
            return None
        if br is None:
            return None
        seq = eng.interleave(br[-1].position)
        return seq[:depth]

    g = GeneDendron(D, extract, f"HJ-style fixed point of {sx.render(system.template)}",
                    branch_search=search)
    g.preproof = pi
    g.system = system
    g.bits_of = bits_of
    return g


# ---------------------------------------------------------------- bounded queries

def approximate_real(g: GeneDendron, alpha: LinearOrder, depth: int, breadth: int = 8,
                     budget: int = 200_000) -> dict:
    """Extraction along the longest branch prefix (at most ``depth`` atoms)
    found by leftmost search, trying depth, depth-1, ... in turn."""
    if g.dend._children_at is None and g.dend.terms is None and g._branch_search is None:
        raise CapabilityError(f"{g.dend.name} has no child enumerator")
    for d in range(depth, -1, -1):
        b = g.branch(alpha, d, breadth, budget)
        if b is not None:
            if not g.dend.in_hull(alpha, b):
                continue
            return g.extract(alpha, b)
    return {}


def longest_prefix(g: GeneDendron, alpha: LinearOrder, depth: int, breadth: int = 8,
                   budget: int = 200_000) -> tuple:
    for d in range(depth, -1, -1):
        b = g.branch(alpha, d, breadth, budget)
        if b is not None:
            return b
    return ()


def altitude_bounded(g: GeneDendron, probes, depth: int, breadth: int = 8) -> Optional[int]:
    """Index of the first probe where Lin* of the dendroid shows a descending
    sequence of length ``depth``; an upper bound for this genedendron only."""
    r = climax_bounded(lin_star(g.dend, breadth=breadth), probes, depth)
    return None if r is None else r[0]


def check_extract_functorial(g: GeneDendron, seq, alpha: LinearOrder, f) -> bool:
    """rho_cod(m_f(seq)) == rho_alpha(seq) for f: alpha -> cod."""
    img = tuple(("p", f(a[1])) if a[0] == "p" else a for a in seq)
    return g.extract(f.codomain, img) == g.extract(alpha, seq)
