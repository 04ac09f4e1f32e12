"""The implicational predilator built from a genedendron and two binary
codes a(Z), b(Z).

A node is a triple (sigma, f, g) of equal length m: sigma is a hull node
of D_X made of m (term, parameter) steps, f lists naturals meant to
descend in b(R) and g lists elements of X meant to carry a(R) into X.
Everything a node knows about R is the partial real extracted from sigma;
a condition "does not decide Q" fails only when evaluation under that
partial real returns a Value refuting it.

Worked example of the length convention: sigma = (t0, p0, t1, p1) has two
steps, so f and g have two entries each and the node reads, interleaved,
<(t0,p0), f0, g0, (t1,p1), f1, g1>.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import oracle as orc
from .dendroid import atom_compare, occ, relabel
from .dilator import Predilator
from .errors import BudgetError, DomainError, StructuralError, ValidationError
from .genedendron import GeneDendron
from .order import LinearOrder, kb_compare, lazy_tree_order


@dataclass(frozen=True)
class ImpNode:
    sigma: tuple = ()
    f: tuple = ()
    g: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "g", tuple(self.g))

    def __len__(self):
        return len(self.f)

    def steps(self) -> list:
        s = self.sigma
        return [(s[2 * i], s[2 * i + 1]) for i in range(len(s) // 2)]

    def letters(self) -> tuple:
        """The interleaving, grouped one (step, f(i), g(i)) per letter."""
        return tuple(zip(self.steps(), self.f, self.g))

    @staticmethod
    def from_letters(letters) -> "ImpNode":
        sigma = tuple(a for step, _, _ in letters for a in step)
        return ImpNode(sigma, tuple(l[1] for l in letters), tuple(l[2] for l in letters))

    def prefix(self, m: int) -> "ImpNode":
        return ImpNode(self.sigma[:2 * m], self.f[:m], self.g[:m])

    def to_json(self) -> dict:
        return {"sigma": [[a[0], a[1]] for a in self.sigma], "f": list(self.f),
                "g": list(self.g)}


@dataclass(frozen=True)
class ImpConfig:
    a_code: orc.Code
    b_code: orc.Code
    budget: int = 2_000
    f_window: int = 16      # f values tried by the child enumerator
    g_window: int = 4       # elements of X tried for g
    step_breadth: int = 2   # dendroid steps tried per node


def restricted_code(base: orc.Code) -> orc.Code:
    """base(x, y) on the elements the real marks with 1: the field of the
    result is {n : R(n) = 1} intersected with the field of base."""
    q = lambda i: orc.Query(orc.Proj(i, 2))
    return orc.Compose(orc.AND, [orc.Compose(orc.AND, [q(0), q(1)]), base])


# ---------------------------------------------------------------- deciding

def _freeze(real: dict):
    return tuple(sorted(real.items()))


_CODES: dict = {}


@lru_cache(maxsize=500_000)
def _eval(code_idx: int, x: int, y: int, real, budget: int):
    r = orc.evaluate(_CODES[code_idx], [x, y], orc.PartialOracle(dict(real)), budget)
    return r.value if isinstance(r, orc.Value) else None


_INDEX: dict = {}


def _register(code) -> int:
    key = id(code)
    hit = _INDEX.get(key)
    if hit is not None and hit[0] is code:
        return hit[1]
    orig = code
    if isinstance(code, int):
        code = orc.decode(code)
    idx = orc.index(code)
    _CODES.setdefault(idx, code)
    _INDEX[key] = (orig, idx)
    return idx


class _Decider:
    """Evaluates a, b under one partial real; None means undecided."""

    def __init__(self, cfg: ImpConfig, real: dict):
        self.real = _freeze(real)
        self.budget = cfg.budget
        self.a = _register(cfg.a_code)
        self.b = _register(cfg.b_code)

    def __call__(self, which: str, x: int, y: int):
        return _eval(self.a if which == "a" else self.b, x, y, self.real, self.budget)


def _f_ok(dec: _Decider, f) -> bool:
    # (3) b does not decide f(i) outside its field
    for x in f:
        if dec("b", x, x) == 0:
            return False
    # (4) no decided increase f(i) <=_b f(j) for i < j
    for i, j in itertools.combinations(range(len(f)), 2):
        if dec("b", f[i], f[j]) == 1:
            return False
    return True


def _g_ok(dec: _Decider, g, X: LinearOrder) -> bool:
    # (6) g(i) <=_X g(j) with i != j rules out a decided i >=_a j in the field
    fld = [i for i in range(len(g)) if dec("a", i, i) == 1]
    for i, j in itertools.permutations(fld, 2):
        if dec("a", j, i) == 1 and X.le(g[i], g[j]):
            return False
    return True


def _check_params(node: ImpNode, X: LinearOrder):
    for x in node.g:
        if not X.contains(x):
            raise DomainError(f"g value {x!r} is not in {X.kind}")
    for a in node.sigma:
        if isinstance(a, tuple) and a[:1] == ("p",) and not X.contains(a[1]):
            raise DomainError(f"parameter {a[1]!r} is not in {X.kind}")


def imp_member(node: ImpNode, X: LinearOrder, gd: GeneDendron, cfg: ImpConfig) -> bool:
    """Conditions (1) to (6) for (sigma, f, g) at X."""
    if not isinstance(node, ImpNode):
        node = ImpNode(*node)
    _check_params(node, X)
    m = len(node.f)
    # (1) and (5)
    if len(node.g) != m or len(node.sigma) != 2 * m:
        return False
    if any(not isinstance(v, int) or v < 0 for v in node.f):
        return False
    # (2)
    if not gd.dend.in_hull(X, node.sigma):
        return False
    dec = _Decider(cfg, gd.extract(X, node.sigma))
    return _f_ok(dec, node.f) and _g_ok(dec, node.g, X)


# ---------------------------------------------------------------- the order

def letter_compare(term_order: LinearOrder, X: LinearOrder):
    """Steps by the atom order, f by N, g by X."""
    acmp = atom_compare(term_order, X)

    def cmp(p, q):
        for a, b in zip(p[0], q[0]):
            c = acmp(a, b)
            if c:
                return c
        if p[1] != q[1]:
            return -1 if p[1] < q[1] else 1
        return X.compare(p[2], q[2])
    return cmp


def imp_compare(gd: GeneDendron, X: LinearOrder):
    lc = letter_compare(gd.dend.term_order, X)
    return lambda s, t: kb_compare(_letters(s), _letters(t), lc)


def _letters(s):
    return s.letters() if isinstance(s, ImpNode) else tuple(s)


def imp_children(node: ImpNode, X: LinearOrder, gd: GeneDendron, cfg: ImpConfig) -> list:
    """One-step extensions in increasing order, conditions checked per
    component so that refuted f or g values are dropped early."""
    D = gd.dend
    steps = []
    for t in D.children(X, node.sigma, cfg.step_breadth):
        for p in D.children(X, node.sigma + (t,), cfg.step_breadth):
            if t[0] == "t" and p[0] == "p":
                steps.append((t, p))
    steps = steps[:cfg.step_breadth]
    xs = X.window(min(X.size, cfg.g_window) if X.is_finite else cfg.g_window)
    out = []
    for step in steps:
        sigma = node.sigma + step
        dec = _Decider(cfg, gd.extract(X, sigma))
        if not _g_ok(dec, node.g, X) or not _f_ok(dec, node.f):
            continue
        fs = [v for v in range(cfg.f_window) if _f_ok(dec, node.f + (v,))]
        gs = [x for x in xs if _g_ok(dec, node.g + (x,), X)]
        out.extend(ImpNode(sigma, node.f + (v,), node.g + (x,)) for v in fs for x in gs)
    return out


@dataclass
class SearchResult:
    branch: Optional[ImpNode]
    exhausted: bool
    visited: int

    def to_json(self):
        return {"found": self.branch is not None, "exhausted": self.exhausted,
                "visited": self.visited,
                "branch": None if self.branch is None else self.branch.to_json()}


def search_branch(gd: GeneDendron, cfg: ImpConfig, X: LinearOrder, length: int,
                  budget: int = 50_000) -> SearchResult:
    """Leftmost node of the given length by depth-first search.  With
    ``exhausted`` set, no node of that length exists among the enumerated
    candidates; otherwise the budget ran out first."""
    stack = [ImpNode()]
    visited = 0
    while stack:
        node = stack.pop()
        visited += 1
        if len(node) == length:
            return SearchResult(node, False, visited)
        if visited > budget:
            return SearchResult(None, False, visited)
        stack.extend(reversed(imp_children(node, X, gd, cfg)))
    return SearchResult(None, True, visited)


def imp_predilator(gd: GeneDendron, cfg: ImpConfig) -> Predilator:
    """X |-> Kleene-Brouwer order on the triples, a proper extension lying
    below its prefix.  Elements are letter tuples (see ImpNode.letters)."""

    def apply(X):
        lc = letter_compare(gd.dend.term_order, X)

        def member(s):
            try:
                return imp_member(ImpNode.from_letters(s), X, gd, cfg)
            except (DomainError, StructuralError, TypeError, IndexError, ValueError):
                return False

        def children(s):
            return [c.letters() for c in imp_children(ImpNode.from_letters(s), X, gd, cfg)]

        out = lazy_tree_order("imp", member, lc, children,
                              params={"genedendron": gd.dend.name})

        def branch(depth, budget):
            r = search_branch(gd, cfg, X, depth, budget)
            return None if r.branch is None else r.branch.letters()

        out._branch = branch
        return out

    def map_elem(f, s):
        return tuple((tuple(relabel(step, f)), v, f(x)) for step, v, x in s)

    def supp(X, s):
        return occ(a for step, _, _ in s for a in step) | {x for _, _, x in s}

    return Predilator(f"imp({gd.dend.name})", apply, map_elem, supp)


# ---------------------------------------------------------------- clause (iii)

def embed_b(branch_prefix, g_prefix, b_enum, cfg: ImpConfig,
            real: Optional[dict] = None) -> list:
    """e(beta_0), ..., e(beta_k) for b_enum = [beta_0, ..., beta_k].

    b(R) comparisons are evaluated under ``real`` (the empty partial real
    by default); an undecided comparison is reported as a budget error.
    """
    steps = len(tuple(branch_prefix)) // 2
    b_enum = list(b_enum)
    if any(x >= y for x, y in zip(b_enum, b_enum[1:])):
        raise ValidationError("b_enum must list naturals in increasing order")
    if steps < len(b_enum) or len(g_prefix) < len(b_enum):
        raise BudgetError(f"need {len(b_enum)} steps and embedding values, have "
                          f"{steps} and {len(g_prefix)}")
    sigma, gs = tuple(branch_prefix), tuple(g_prefix)
    dec = _Decider(cfg, real or {})

    def below(x, y):          # x <_b y
        v = dec("b", y, x)
        if v is None:
            raise BudgetError(f"b({y}, {x}) undecided")
        return v == 0

    out = []
    for i, beta in enumerate(b_enum):
        bigger = [j for j in range(i) if below(beta, b_enum[j])]
        if not bigger:
            out.append(ImpNode(sigma[:2], (beta,), gs[:1]))
            continue
        l = bigger[0]
        for j in bigger[1:]:
            if below(b_enum[j], b_enum[l]):
                l = j
        par = out[l]
        m = len(par)
        out.append(ImpNode(sigma[:2 * (m + 1)], par.f + (beta,), gs[:m + 1]))
    return out


# ---------------------------------------------------------------- clause (ii)

def _a_field(dec: _Decider, n: int) -> list:
    return [i for i in range(n) if dec("a", i, i) == 1]


def a_embedding(cfg: ImpConfig, X: LinearOrder, length: int, real: dict) -> Optional[tuple]:
    """g of the given length, strictly increasing on the decided field of a,
    sending the rest to the image of the a-least field element; None if X
    is too small."""
    dec = _Decider(cfg, real)
    fld = _a_field(dec, length)
    rank = sorted(fld, key=lambda i: sum(1 for j in fld if j != i and dec("a", j, i) == 1))
    xs = X.window(X.size if X.is_finite else len(rank) + 1)
    if len(xs) < len(rank):
        return None
    img = {i: xs[k] for k, i in enumerate(rank)}
    low = xs[0] if xs else None
    if low is None and length:
        return None
    return tuple(img.get(i, low) for i in range(length))


def b_descent(cfg: ImpConfig, length: int, real: dict, window: int = 4096) -> Optional[tuple]:
    """Greedy f: each value the least natural above the last one that no
    decided fact rules out."""
    dec = _Decider(cfg, real)
    f = ()
    v = 0
    while len(f) < length:
        if v >= window:
            return None
        if _f_ok(dec, f + (v,)):
            f += (v,)
        v += 1
    return f


def check_clause_ii(gd: GeneDendron, cfg: ImpConfig, X: LinearOrder, depth: int,
                    breadth: int = 8, budget: int = 200_000,
                    search_budget: int = 20_000) -> dict:
    """Bounded evidence for: Imp(X) ill-founded iff a(R) and Clim(D) embed into X.

    (<=) a D_X branch of ``depth`` steps and an a(R) embedding give nodes
    n_1 > n_2 > ... ; (=>) from a descending chain (the searched one when
    found, else the constructed one) the sigma and g parts are read back and
    checked.
    """
    rep = {"X": X.to_json(), "depth": depth, "dx_branch": False, "a_embeds": False,
           "constructed": False, "searched": None, "recovered_branch": False,
           "recovered_embedding": False, "problems": []}
    if depth <= 0:
        return rep
    sigma = gd.branch(X, 2 * depth, breadth, budget)
    real = {}
    if sigma is not None:
        rep["dx_branch"] = True
        real = gd.extract(X, sigma)
    g = a_embedding(cfg, X, depth, real)
    rep["a_embeds"] = g is not None
    chain = None
    if sigma is not None and g is not None:
        f = b_descent(cfg, depth, real)
        if f is not None:
            top = ImpNode(sigma, f, g)
            nodes = [top.prefix(m) for m in range(1, depth + 1)]
            bad = [m for m, n in enumerate(nodes, 1) if not imp_member(n, X, gd, cfg)]
            if bad:
                rep["problems"].append(f"constructed prefixes {bad} are not members")
            else:
                rep["constructed"] = True
                chain = nodes
    found = search_branch(gd, cfg, X, depth, search_budget)
    rep["searched"] = found.to_json()
    if found.branch is not None:
        chain = [found.branch.prefix(m) for m in range(1, depth + 1)]
    if chain is not None:
        cmp = imp_compare(gd, X)
        if any(cmp(b, a) >= 0 for a, b in zip(chain, chain[1:])):
            rep["problems"].append("chain is not descending")
        last = chain[-1]
        rep["recovered_branch"] = gd.dend.in_hull(X, last.sigma)
        dec = _Decider(cfg, gd.extract(X, last.sigma))
        rep["recovered_embedding"] = _g_ok(dec, last.g, X)
        rep["recovered"] = last.to_json()
    return rep
