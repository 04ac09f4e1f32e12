"""Finite structures for the two-sorted language.

A structure fixes a finite N-domain {0..size-1} with total S, +, *,
binary relations for = and le, an ordinal sort given by a finite linear
order, interpretations of I(eta, .) and Ibar, and values for the
eigenvariables.  Evaluation is exact in the structure; it serves both as
the model corpus of the soundness check and as the search guide.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..errors import DomainError
from ..order import LinearOrder, fin
from . import syntax as sx


@dataclass
class Structure:
    size: int
    succ: Callable[[int], int]
    plus: Callable[[int, int], int]
    times: Callable[[int, int], int]
    eq: Callable[[int, int], bool]
    le: Callable[[int, int], bool]
    alpha: LinearOrder
    I: dict = field(default_factory=dict)          # eta -> frozenset of N values
    Ibar: frozenset = frozenset()
    preds: dict = field(default_factory=dict)
    ev: dict = field(default_factory=dict)

    def term(self, t, env) -> int:
        k = t[0]
        if k == "0":
            return 0
        if k == "S":
            return self.succ(self.term(t[1], env))
        if k == "+":
            return self.plus(self.term(t[1], env), self.term(t[2], env))
        if k == "*":
            return self.times(self.term(t[1], env), self.term(t[2], env))
        if k == "var":
            if t[1] not in env:
                raise DomainError(f"unbound variable {t[1]}")
            return env[t[1]]
        if k == "ev":
            return self.ev.get(t[1], 0) % self.size
        raise DomainError(f"bad N term {t!r}")

    def ord(self, o, env):
        if o[0] == "par":
            return o[1]
        return env[o[1]]

    def holds(self, A, env=None, X: Optional[frozenset] = None) -> bool:
        env = env or {}
        k = A[0]
        if k == "=":
            return self.eq(self.term(A[1], env), self.term(A[2], env))
        if k == "le":
            return self.le(self.term(A[1], env), self.term(A[2], env))
        if k == "leqo":
            return self.alpha.le(self.ord(A[1], env), self.ord(A[2], env))
        if k == "I":
            return self.term(A[2], env) in self.I.get(self.ord(A[1], env), frozenset())
        if k == "Ibar":
            return self.term(A[1], env) in self.Ibar
        if k == "X":
            return X is not None and self.term(A[1], env) in X
        if k == "pred":
            fn = self.preds.get(A[1])
            return bool(fn and fn(*[self.term(t, env) for t in A[2]]))
        if k == "not":
            return not self.holds(A[1], env, X)
        if k == "and":
            return self.holds(A[1], env, X) and self.holds(A[2], env, X)
        if k == "or":
            return self.holds(A[1], env, X) or self.holds(A[2], env, X)
        if k == "imp":
            return (not self.holds(A[1], env, X)) or self.holds(A[2], env, X)
        dom = range(self.size) if A[1] == "N" else self.alpha.window(self.alpha.size)
        test = all if k == "forall" else any
        return test(self.holds(A[3], {**env, A[2]: v}, X) for v in dom)

    def refutes(self, sequent) -> bool:
        """Every antecedent formula holds and no succedent formula does."""
        ante, succ = sequent
        return all(self.holds(A) for A in ante) and not any(self.holds(B) for B in succ)

    def satisfies(self, sequent) -> bool:
        return not self.refutes(sequent)


def _stages(st: Structure, template):
    """I(eta) = union of Phi(I(zeta)) over zeta < eta; Ibar = union of all Phi(I(eta))."""
    if template is None:
        return
    elems = st.alpha.window(st.alpha.size)

    def phi(Xs):
        return frozenset(n for n in range(st.size)
                         if st.holds(template, {"x": n}, Xs))

    I = {}
    acc = frozenset()
    for e in elems:
        I[e] = acc
        acc = acc | phi(acc)
    st.I = I
    st.Ibar = frozenset().union(*[phi(I[e]) for e in elems]) if elems else frozenset()


def standard(alpha: LinearOrder, size: int = 12, template=None) -> Structure:
    """Arithmetic truncated at ``size`` (operations saturate at size-1)."""
    top = size - 1
    st = Structure(size, lambda n: min(n + 1, top), lambda a, b: min(a + b, top),
                   lambda a, b: min(a * b, top), lambda a, b: a == b, lambda a, b: a <= b,
                   alpha)
    _stages(st, template)
    return st


def random_structure(rng: random.Random, alpha: LinearOrder, size: int = 3,
                     template=None, eq_is_equality: bool = False) -> Structure:
    """Arbitrary operations and relations on a small domain."""
    S = [rng.randrange(size) for _ in range(size)]
    Pl = [[rng.randrange(size) for _ in range(size)] for _ in range(size)]
    Ti = [[rng.randrange(size) for _ in range(size)] for _ in range(size)]
    E = [[rng.random() < 0.5 for _ in range(size)] for _ in range(size)]
    L = [[rng.random() < 0.5 for _ in range(size)] for _ in range(size)]
    eq = (lambda a, b: a == b) if eq_is_equality else (lambda a, b: E[a][b])
    st = Structure(size, S.__getitem__, lambda a, b: Pl[a][b], lambda a, b: Ti[a][b],
                   eq, lambda a, b: L[a][b], alpha,
                   ev={p: rng.randrange(size) for p in range(64)})
    _stages(st, template)
    return st


def model_corpus(alpha: LinearOrder, n: int = 24, seed: int = 0, template=None,
                 eq_is_equality: bool = False) -> list:
    rng = random.Random(seed)
    out = [standard(alpha, 6, template)]
    while len(out) < n:
        out.append(random_structure(rng, alpha, rng.randint(1, 3), template, eq_is_equality))
    return out
