"""Formulas of the two-sorted language as hashable tuples, with an
s-expression reader/printer, substitution, degree and a canonical
enumeration that commutes with relabeling of ordinal parameters.

Terms of sort N: ("0",), ("S", t), ("+", t, u), ("*", t, u), ("var", name),
("ev", p) for the eigenvariable x_p.  Terms of sort Ord: ("ovar", name),
("par", xi).  Atoms: ("=", t, u), ("le", t, u), ("leqo", o, o'),
("I", o, t), ("Ibar", t), ("X", t) (operator templates only) and
("pred", name, args).  Compound: ("not", A), ("and"|"or"|"imp", A, B),
("forall"|"exists", sort, name, A).

Bound variables are renamed to v0, v1, ... by quantifier depth, so
alpha-equivalent formulas are equal as tuples.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from ..errors import StructuralError, ValidationError

ATOMS = {"=", "le", "leqo", "I", "Ibar", "X", "pred"}
BINARY = {"and", "or", "imp"}
QUANT = {"forall", "exists"}
SORTS = ("N", "Ord")


class SyntaxErr(StructuralError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} at offset {pos}")
        self.pos = pos


class SortErr(StructuralError):
    def __init__(self, msg, subterm=None):
        super().__init__(msg if subterm is None else f"{msg}: {subterm}")
        self.subterm = subterm


# ---------------------------------------------------------------- reader

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise SyntaxErr("unexpected character", pos)
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), start))
        pos = m.end()
    return out


def _read(text: str):
    toks = _tokens(text)
    i = 0

    def item():
        nonlocal i
        if i >= len(toks):
            raise SyntaxErr("unexpected end of input", len(text))
        tok, pos = toks[i]
        i += 1
        if tok == "(":
            lst = []
            while True:
                if i >= len(toks):
                    raise SyntaxErr("unclosed parenthesis", pos)
                if toks[i][0] == ")":
                    i += 1
                    return (lst, pos)
                lst.append(item())
        if tok == ")":
            raise SyntaxErr("unexpected ')'", pos)
        return (tok, pos)

    tree = item()
    if i != len(toks):
        raise SyntaxErr("trailing input", toks[i][1])
    return tree


_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_'\-]*$")
_CANON = re.compile(r"^v\d+$")
_KEYWORDS = {"S", "+", "*", "=", "le", "leq-ord", "I", "Ibar", "X", "not", "and", "or",
             "imp", "forall", "exists", "seq"}


def _term(node, env, sort):
    x, pos = node
    if isinstance(x, str):
        if sort == "Ord":
            if x.startswith("#"):
                try:
                    return ("par", int(x[1:]))
                except ValueError:
                    raise SyntaxErr(f"bad parameter {x!r}", pos) from None
            if env.get(x) == "Ord":
                return ("ovar", x)
            if env.get(x) == "N":
                raise SortErr("N variable used where Ord is expected", x)
            raise SortErr("free Ord variable", x)
        if x == "0":
            return ("0",)
        if x.startswith("?"):
            try:
                return ("ev", int(x[1:]))
            except ValueError:
                raise SyntaxErr(f"bad eigenvariable {x!r}", pos) from None
        if x.startswith("#"):
            raise SortErr("Ord parameter used where N is expected", x)
        if env.get(x) == "Ord":
            raise SortErr("Ord variable used where N is expected", x)
        if not _IDENT.match(x) or x in _KEYWORDS:
            raise SyntaxErr(f"bad term {x!r}", pos)
        if x not in env and _CANON.match(x):
            raise SortErr("free variables may not use the reserved names v<k>", x)
        return ("var", x)
    if sort == "Ord":
        raise SortErr("compound term where Ord is expected", render_sexpr(node))
    if not x:
        raise SyntaxErr("empty term", pos)
    head = x[0][0]
    args = x[1:]
    if head == "S" and len(args) == 1:
        return ("S", _term(args[0], env, "N"))
    if head in ("+", "*") and len(args) == 2:
        return (head, _term(args[0], env, "N"), _term(args[1], env, "N"))
    raise SyntaxErr(f"bad term head {head!r}", pos)


def _formula(node, env):
    x, pos = node
    if isinstance(x, str) or not x:
        raise SyntaxErr("expected a formula", pos)
    head, hpos = x[0]
    if not isinstance(head, str):
        raise SyntaxErr("expected a formula head", hpos)
    args = x[1:]

    def need(n):
        if len(args) != n:
            raise SyntaxErr(f"{head} takes {n} arguments", pos)

    if head == "=":
        need(2)
        return ("=", _term(args[0], env, "N"), _term(args[1], env, "N"))
    if head == "le":
        need(2)
        return ("le", _term(args[0], env, "N"), _term(args[1], env, "N"))
    if head == "leq-ord":
        need(2)
        return ("leqo", _term(args[0], env, "Ord"), _term(args[1], env, "Ord"))
    if head == "I":
        need(2)
        return ("I", _term(args[0], env, "Ord"), _term(args[1], env, "N"))
    if head == "Ibar":
        need(1)
        return ("Ibar", _term(args[0], env, "N"))
    if head == "X":
        need(1)
        return ("X", _term(args[0], env, "N"))
    if head == "not":
        need(1)
        return ("not", _formula(args[0], env))
    if head in BINARY:
        need(2)
        return (head, _formula(args[0], env), _formula(args[1], env))
    if head in QUANT:
        need(3)
        sort, spos = args[0]
        name, npos = args[1]
        if sort not in SORTS:
            raise SortErr("unknown sort", sort)
        if not isinstance(name, str) or not _IDENT.match(name) or name in _KEYWORDS:
            raise SyntaxErr("bad bound variable", npos)
        env2 = dict(env)
        env2[name] = sort
        body = _formula(args[2], env2)
        return (head, sort, name, body)
    if _IDENT.match(head) and head not in _KEYWORDS:
        return ("pred", head, tuple(_term(a, env, "N") for a in args))
    raise SyntaxErr(f"unknown formula head {head!r}", hpos)


def render_sexpr(node) -> str:
    x, _ = node
    if isinstance(x, str):
        return x
    return "(" + " ".join(render_sexpr(y) for y in x) + ")"


def parse_formula(text: str):
    return canonical(_formula(_read(text), {}))


def parse_sequent(text: str):
    """"(seq (A ...) (B ...))" -> (antecedent tuple, succedent tuple)."""
    tree = _read(text)
    x, pos = tree
    if isinstance(x, str) or len(x) != 3 or x[0][0] != "seq":
        raise SyntaxErr("expected (seq (ante ...) (succ ...))", pos)
    sides = []
    for side in x[1:]:
        items, spos = side
        if isinstance(items, str):
            raise SyntaxErr("expected a list of formulas", spos)
        sides.append(tuple(canonical(_formula(it, {})) for it in items))
    return sides[0], sides[1]


# ---------------------------------------------------------------- printer

def render_term(t) -> str:
    k = t[0]
    if k == "0":
        return "0"
    if k == "S":
        return f"(S {render_term(t[1])})"
    if k in ("+", "*"):
        return f"({k} {render_term(t[1])} {render_term(t[2])})"
    if k in ("var", "ovar"):
        return t[1]
    if k == "ev":
        return f"?{t[1]}"
    if k == "par":
        return f"#{t[1]}"
    raise StructuralError(f"bad term {t!r}")


def render(A) -> str:
    k = A[0]
    if k in ("=", "le"):
        return f"({k} {render_term(A[1])} {render_term(A[2])})"
    if k == "leqo":
        return f"(leq-ord {render_term(A[1])} {render_term(A[2])})"
    if k == "I":
        return f"(I {render_term(A[1])} {render_term(A[2])})"
    if k in ("Ibar", "X"):
        return f"({k} {render_term(A[1])})"
    if k == "pred":
        return "(" + " ".join([A[1]] + [render_term(t) for t in A[2]]) + ")"
    if k == "not":
        return f"(not {render(A[1])})"
    if k in BINARY:
        return f"({k} {render(A[1])} {render(A[2])})"
    if k in QUANT:
        return f"({k} {A[1]} {A[2]} {render(A[3])})"
    raise StructuralError(f"bad formula {A!r}")


def render_sequent(seq) -> str:
    ante, succ = seq
    return "(seq (" + " ".join(render(a) for a in ante) + ") (" + " ".join(render(b) for b in succ) + "))"


# ---------------------------------------------------------------- structure

def is_atomic(A) -> bool:
    return A[0] in ATOMS


def _map_terms(A, fn):
    """Apply fn to every maximal term position (N and Ord)."""
    k = A[0]
    if k in ("=", "le", "leqo", "I"):
        return (k, fn(A[1]), fn(A[2]))
    if k in ("Ibar", "X"):
        return (k, fn(A[1]))
    if k == "pred":
        return (k, A[1], tuple(fn(t) for t in A[2]))
    if k == "not":
        return (k, _map_terms(A[1], fn))
    if k in BINARY:
        return (k, _map_terms(A[1], fn), _map_terms(A[2], fn))
    if k in QUANT:
        return (k, A[1], A[2], _map_terms(A[3], fn))
    raise StructuralError(f"bad formula {A!r}")


def _subst_term(t, name, val):
    k = t[0]
    if k in ("var", "ovar"):
        return val if t[1] == name else t
    if k == "S":
        return ("S", _subst_term(t[1], name, val))
    if k in ("+", "*"):
        return (k, _subst_term(t[1], name, val), _subst_term(t[2], name, val))
    return t


def _subst(A, name, val):
    k = A[0]
    if k in QUANT:
        if A[2] == name:
            return A
        return (k, A[1], A[2], _subst(A[3], name, val))
    if k == "not":
        return (k, _subst(A[1], name, val))
    if k in BINARY:
        return (k, _subst(A[1], name, val), _subst(A[2], name, val))
    return _map_terms(A, lambda t: _subst_term(t, name, val))


def canonical(A, depth: int = 0, env: Optional[dict] = None):
    """Rename bound variables to v<depth>."""
    env = env or {}
    k = A[0]
    if k in QUANT:
        new = f"v{depth}"
        env2 = dict(env)
        env2[A[2]] = new
        return (k, A[1], new, canonical(A[3], depth + 1, env2))
    if k == "not":
        return (k, canonical(A[1], depth, env))
    if k in BINARY:
        return (k, canonical(A[1], depth, env), canonical(A[2], depth, env))

    def ren(t):
        kk = t[0]
        if kk in ("var", "ovar"):
            return (kk, env.get(t[1], t[1]))
        if kk == "S":
            return ("S", ren(t[1]))
        if kk in ("+", "*"):
            return (kk, ren(t[1]), ren(t[2]))
        return t

    return _map_terms(A, ren)


def instantiate_body(Q, val):
    """B0(val) for a quantified formula Q = (forall|exists, sort, v, B0)."""
    return canonical(_subst(Q[3], Q[2], val))


def _term_params(t, acc):
    k = t[0]
    if k == "par":
        acc.add(t[1])
    elif k == "S":
        _term_params(t[1], acc)
    elif k in ("+", "*"):
        _term_params(t[1], acc)
        _term_params(t[2], acc)


def params(A) -> set:
    acc = set()
    _map_terms(A, lambda t: (_term_params(t, acc), t)[1])
    return acc


def relabel(A, f):
    """Send every parameter xi to f(xi)."""

    def go(t):
        k = t[0]
        if k == "par":
            return ("par", f(t[1]))
        if k == "S":
            return ("S", go(t[1]))
        if k in ("+", "*"):
            return (k, go(t[1]), go(t[2]))
        return t

    return _map_terms(A, go)


def _term_free(t, bound, acc):
    k = t[0]
    if k in ("var", "ovar") and t[1] not in bound:
        acc.add(t)
    elif k == "S":
        _term_free(t[1], bound, acc)
    elif k in ("+", "*"):
        _term_free(t[1], bound, acc)
        _term_free(t[2], bound, acc)


def free_vars(A, bound=frozenset()) -> set:
    acc = set()
    k = A[0]
    if k in QUANT:
        return free_vars(A[3], bound | {A[2]})
    if k == "not":
        return free_vars(A[1], bound)
    if k in BINARY:
        return free_vars(A[1], bound) | free_vars(A[2], bound)
    _map_terms(A, lambda t: (_term_free(t, bound, acc), t)[1])
    return acc


def is_closed(A) -> bool:
    return not free_vars(A)


def eigenvariables(A) -> set:
    acc = set()

    def go(t):
        k = t[0]
        if k == "ev":
            acc.add(t[1])
        elif k == "S":
            go(t[1])
        elif k in ("+", "*"):
            go(t[1])
            go(t[2])
        return t

    _map_terms(A, go)
    return acc


def degree(A) -> int:
    k = A[0]
    if k in ATOMS:
        return 0
    if k == "not":
        return degree(A[1]) + 1
    if k in BINARY:
        return max(degree(A[1]), degree(A[2])) + 1
    return degree(A[3]) + 1


def numeral(n: int):
    t = ("0",)
    for _ in range(n):
        t = ("S", t)
    return t


def numeral_value(t) -> Optional[int]:
    n = 0
    while t[0] == "S":
        n += 1
        t = t[1]
    return n if t[0] == "0" else None


def immediate_parts(A) -> tuple:
    k = A[0]
    if k == "not":
        return (A[1],)
    if k in BINARY:
        return (A[1], A[2])
    if k in QUANT:
        return (A[3],)
    return ()


def kind(A) -> str:
    """Principal connective: an atom kind or and/or/not/imp, or
    forall_N / exists_Ord and so on."""
    k = A[0]
    if k in QUANT:
        return f"{k}_{A[1]}"
    return k


def to_json(A) -> str:
    return render(A)


# ---------------------------------------------------------------- templates

def apply_template(P, set_atom, t):
    """P(X, x) with X(s) replaced by set_atom(s) and the variable x by t."""

    def go(A):
        k = A[0]
        if k == "X":
            return set_atom(A[1])
        if k == "not":
            return ("not", go(A[1]))
        if k in BINARY:
            return (k, go(A[1]), go(A[2]))
        if k in QUANT:
            return (k, A[1], A[2], go(A[3]))
        return A

    return canonical(_subst(go(P), "x", t))


def check_template(P):
    """Operator templates: X positive, only x free (sort N)."""
    fv = free_vars(P)
    if fv - {("var", "x")}:
        raise ValidationError(f"template has stray free variables {sorted(fv)}")

    def pos(A, sign):
        k = A[0]
        if k == "X" and not sign:
            raise ValidationError("X occurs negatively in the operator template")
        if k == "not":
            pos(A[1], not sign)
        elif k == "imp":
            pos(A[1], not sign)
            pos(A[2], sign)
        elif k in ("and", "or"):
            pos(A[1], sign)
            pos(A[2], sign)
        elif k in QUANT:
            pos(A[3], sign)
        elif k in ("I", "Ibar"):
            raise ValidationError("templates may not mention I or Ibar")

    pos(P, True)
    if params(P):
        raise ValidationError("templates may not carry ordinal parameters")
    return P


# ---------------------------------------------------------------- enumeration

def _n_terms(w: int, scope: tuple, eig: bool) -> list:
    return list(_n_terms_c(w, scope, eig))


@lru_cache(maxsize=None)
def _n_terms_c(w, scope, eig):
    out = []
    if w == 1:
        out.append(("0",))
        out.extend(("var", f"v{i}") for i, s in enumerate(scope) if s == "N")
    if eig and w >= 1:
        out.append(("ev", w - 1))
    if w >= 2:
        out.extend(("S", t) for t in _n_terms_c(w - 1, scope, eig))
    for op in ("+", "*"):
        for a in range(1, w - 1):
            b = w - 1 - a
            for x in _n_terms_c(a, scope, eig):
                for y in _n_terms_c(b, scope, eig):
                    out.append((op, x, y))
    return tuple(out)


def _o_terms(scope: tuple, maxp: int) -> list:
    return [("par", j) for j in range(maxp)] + \
           [("ovar", f"v{i}") for i, s in enumerate(scope) if s == "Ord"]


@lru_cache(maxsize=None)
def _formulas_c(w, scope, system, maxp):
    eig = system == "lk"
    out = []
    # atoms
    for k in ("=", "le"):
        for a in range(1, w - 1):
            for x in _n_terms_c(a, scope, eig):
                for y in _n_terms_c(w - 1 - a, scope, eig):
                    out.append((k, x, y))
    if w == 3:
        for o1 in _o_terms(scope, maxp):
            for o2 in _o_terms(scope, maxp):
                out.append(("leqo", o1, o2))
    if system == "inductive":
        if w >= 3:
            for o in _o_terms(scope, maxp):
                for t in _n_terms_c(w - 2, scope, eig):
                    out.append(("I", o, t))
        if w >= 2:
            for t in _n_terms_c(w - 1, scope, eig):
                out.append(("Ibar", t))
    # connectives
    if w >= 2:
        out.extend(("not", A) for A in _formulas_c(w - 1, scope, system, maxp))
    for k in ("and", "or", "imp"):
        for a in range(1, w - 1):
            for A in _formulas_c(a, scope, system, maxp):
                for B in _formulas_c(w - 1 - a, scope, system, maxp):
                    out.append((k, A, B))
    if w >= 2:
        for q in ("forall", "exists"):
            for s in SORTS:
                name = f"v{len(scope)}"
                for B in _formulas_c(w - 1, scope + (s,), system, maxp):
                    out.append((q, s, name, B))
    return tuple(out)


def _is_collapsed_skeleton(A) -> Optional[int]:
    ps = params(A)
    if ps != set(range(len(ps))):
        return None
    # first occurrences must also be in increasing order? no: collapse is by
    # value, so any injective use of 0..k-1 is a distinct skeleton
    return len(ps)


class FormulaStream:
    """Closed formulas whose parameters come from a set of q positions.

    Formulas are produced by weight, then by generation order of the
    collapsed skeleton, then by the lexicographic order of increasing
    assignments of skeleton parameters to positions 0..q-1.  Relabeling the
    positions along an increasing map therefore commutes with the order.
    """

    _cache = {}

    def __init__(self, system: str, q: int):
        self.system = system
        self.q = q
        self.items = []
        self._gen = self._generate()

    @classmethod
    def get(cls, system: str, q: int) -> "FormulaStream":
        key = (system, q)
        if key not in cls._cache:
            cls._cache[key] = FormulaStream(system, q)
        return cls._cache[key]

    def _generate(self):
        w = 1
        while True:
            for A in _formulas_c(w, (), self.system, w):
                if not is_closed(A):
                    continue
                k = _is_collapsed_skeleton(A)
                if k is None or k > self.q:
                    continue
                for combo in itertools.combinations(range(self.q), k):
                    yield relabel(A, combo.__getitem__) if k else A
            w += 1

    def __getitem__(self, i):
        while len(self.items) <= i:
            self.items.append(next(self._gen))
        return self.items[i]


def formulas_over(system: str, xs: list) -> Iterator:
    """Stream of closed formulas with parameters among the sorted list xs."""
    st = FormulaStream.get(system, len(xs))
    i = 0
    while True:
        A = st[i]
        yield relabel(A, xs.__getitem__) if len(xs) else A
        i += 1


def least_new_formula(system: str, xs: list, avoid: Iterable, limit: int = 200_000):
    """Least formula over xs that is not in ``avoid``; None if the limit is hit."""
    avoid = set(avoid)
    for i, A in enumerate(formulas_over(system, xs)):
        if i >= limit:
            return None
        if A not in avoid:
            return A
    return None


def terms(system: str, n: int) -> list:
    """The first n closed terms of sort N in the canonical order."""
    out = []
    w = 1
    eig = system == "lk"
    while len(out) < n:
        out.extend(_n_terms_c(w, (), eig))
        w += 1
    return out[:n]
