"""Lazy preproofs generated by the search scheme for LK over a parameter
order, with the rules for the inductive operator I / Ibar.

A position is a tuple of atoms ("t", k) (k-th premise of a finite or
omega-branching rule) and ("p", xi) (premise xi of an ordinal rule).
Labels are computed by replaying the scheme along the position and are
memoized per preproof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from ..dendroid import Prequasidendroid, collapse, occ, relabel as relabel_seq
from ..errors import (BranchInvalidError, BudgetError, DomainError, StructuralError,
                      ValidationError)
from ..order import INF, IncreasingMap, LinearOrder, Omega, OmegaPlusOne
from . import syntax as sx

INITIAL, INTERIM, LAST = "Initial", "Interim", "Last"


# ---------------------------------------------------------------- systems

@dataclass(frozen=True)
class System:
    name: str                       # "lk" or "inductive"
    template: Optional[tuple] = None

    def P(self, set_atom: Callable, t):
        return sx.apply_template(self.template, set_atom, t)

    def P_I(self, eta, t):
        return self.P(lambda s: ("I", ("par", eta), s), t)

    def P_Ibar(self, t):
        return self.P(lambda s: ("Ibar", s), t)


LK = System("lk")


def inductive(template: Union[str, tuple]) -> System:
    """LK with the I / Ibar rules for the operator P(X, x)."""
    P = sx.parse_formula(template) if isinstance(template, str) else template
    return System("inductive", sx.check_template(P))


def system_from_name(name: str, template=None) -> System:
    if name == "lk":
        return LK
    if name == "inductive":
        return inductive(template or "(= x x)")
    raise DomainError(f"unknown proof system {name!r}")


# ---------------------------------------------------------------- nodes

@dataclass(eq=False)
class ProofNode:
    position: tuple
    sequent: tuple                       # (antecedent tuple, succedent tuple)
    level: int
    dagger: Optional[tuple]              # ("L"|"R", index); None inside a forced cut
    stage: int
    phase: str
    params: frozenset
    conclusion_params: tuple             # param set of every node on the path, root first
    rule: str = ""
    axiom: Optional[str] = None
    principal: Optional[tuple] = None
    cut: Optional[tuple] = None
    arity: str = "none"                  # none | finite | omega | ordinal
    premises: tuple = ()                 # finite rules: (ante_add, succ_add, extra) per premise
    base: Optional["ProofNode"] = None   # for the forced cut inside I L / Ibar L
    forced: Optional[tuple] = None

    @property
    def ante(self):
        return self.sequent[0]

    @property
    def succ(self):
        return self.sequent[1]

    def occ(self) -> set:
        out = set()
        for A in self.ante + self.succ:
            out |= sx.params(A)
        return out

    def to_json(self) -> dict:
        return {
            "position": [{a[0]: a[1]} for a in self.position],
            "rule": self.rule if self.axiom is None else f"Ax:{self.axiom}",
            "sequent": {"ante": [sx.render(A) for A in self.ante],
                        "succ": [sx.render(A) for A in self.succ]},
            "level": self.level,
            "stage": self.stage,
            "phase": self.phase,
            "params": sorted(self.params),
        }


def _advance(conc: ProofNode, n_ante_add: int, n_succ_add: int, ante_new, succ_new,
             premise_level: int):
    """Dagger, phase and stage of a premise of the portion at ``conc``."""
    side, i = conc.dagger
    stage = conc.stage
    if side == "R":
        if i < len(conc.succ) - 1:
            return ("R", n_succ_add + i + 1), INITIAL, stage
        if ante_new:
            j = len(ante_new) - 1
            return ("L", j), (LAST if j == 0 else INTERIM), stage
        return ("R", 0), INITIAL, stage
    if i > 0:
        return ("L", i - 1), (LAST if i - 1 == 0 else INTERIM), stage
    stage = stage - 1 if stage > 0 else premise_level
    if succ_new:
        return ("R", 0), INITIAL, stage
    j = len(ante_new) - 1
    return ("L", j), (LAST if j == 0 else INTERIM), stage


# ---------------------------------------------------------------- axioms

def _match_subst(A, B, t, u) -> bool:
    """B arises from A by replacing some occurrences of t with u."""
    if A == B:
        return True
    if A == t and B == u:
        return True
    if not isinstance(A, tuple) or not isinstance(B, tuple) or len(A) != len(B):
        return False
    if not A or A[0] != B[0]:
        return False
    return all(_match_subst(x, y, t, u) for x, y in zip(A[1:], B[1:]))


def axiom_of(system: System, alpha: LinearOrder, ante, succ) -> Optional[str]:
    sa, ss = set(ante), set(succ)
    if sa & ss:
        return "Id"
    for B in succ:
        if B[0] == "leqo" and B[1][0] == "par" and B[2][0] == "par":
            if alpha.le(B[1][1], B[2][1]):
                return "leqR"
    for A in ante:
        if A[0] == "leqo" and A[1][0] == "par" and A[2][0] == "par":
            if alpha.lt(A[2][1], A[1][1]):
                return "leqL"
    if system.name != "inductive":
        return None
    for B in succ:
        if B[0] == "=" and B[1] == B[2]:
            return "eqR"
    for A in ante:
        if A[0] == "=":
            n, m = sx.numeral_value(A[1]), sx.numeral_value(A[2])
            if n is not None and m is not None and n != m:
                return "eqL1"
    eqs = [A for A in ante if A[0] == "="]
    atoms_l = [A for A in ante if sx.is_atomic(A)]
    atoms_r = [B for B in succ if sx.is_atomic(B)]
    for e in eqs:
        for A in atoms_l:
            for B in atoms_r:
                if _match_subst(A, B, e[1], e[2]):
                    return "eqL0"
    return None


# ---------------------------------------------------------------- preproofs

class Preproof:
    """The preproof generated from ``root`` over the parameter order ``alpha``."""

    def __init__(self, system: System, root: tuple, alpha: LinearOrder,
                 cut_limit: int = 200_000):
        ante, succ = tuple(root[0]), tuple(root[1])
        for A in ante + succ:
            if not sx.is_closed(A):
                raise ValidationError(f"root formula {sx.render(A)} is not closed")
            for xi in sx.params(A):
                if not alpha.contains(xi):
                    raise DomainError(f"root parameter {xi!r} is not in alpha")
        if not ante and not succ:
            raise ValidationError("the root sequent is empty")
        self.system = system
        self.root_sequent = (ante, succ)
        self.alpha = alpha
        self.cut_limit = cut_limit
        X0 = frozenset().union(*[sx.params(A) for A in ante + succ]) if ante + succ else frozenset()
        if succ:
            dagger, phase = ("R", 0), INITIAL
        else:
            dagger = ("L", len(ante) - 1)
            phase = LAST if len(ante) == 1 else INTERIM
        root_node = ProofNode((), (ante, succ), 0, dagger, 0, phase, X0, (X0,))
        self._decide(root_node)
        self._memo = {(): root_node}

    # ---- public

    @property
    def root(self) -> ProofNode:
        return self._memo[()]

    def label(self, position) -> Optional[ProofNode]:
        position = tuple(position)
        node = self._memo.get(position)
        if node is not None or position == ():
            return node
        k = len(position) - 1
        while k > 0 and position[:k] not in self._memo:
            k -= 1
        node = self._memo[position[:k]]
        for j in range(k, len(position)):
            node = self._child(node, position[j])
            if node is None:
                return None
            self._memo[position[:j + 1]] = node
        return node

    def child_atoms(self, position, breadth: int = 8) -> list:
        node = self.label(position)
        if node is None:
            return []
        return self._atoms(node, breadth)

    def children(self, position, breadth: int = 8) -> list:
        position = tuple(position)
        return [self.label(position + (a,)) for a in self.child_atoms(position, breadth)]

    def is_terminal(self, position) -> bool:
        node = self.label(position)
        return node is not None and node.arity == "none"

    # ---- internals

    def _atoms(self, node, breadth):
        if node.arity == "finite":
            return [("t", i) for i in range(len(node.premises))]
        if node.arity == "omega":
            return [("t", k) for k in range(breadth)]
        if node.arity == "ordinal":
            xs = self.alpha.window(self.alpha.size if self.alpha.is_finite else breadth)
            return [("p", x) for x in xs]
        return []

    def _xs(self, node) -> list:
        return self.alpha.sorted(node.conclusion_params[node.stage])

    def _least_cut(self, node, avoid) -> Optional[tuple]:
        return sx.least_new_formula(self.system.name, self._xs(node), avoid,
                                    limit=self.cut_limit)

    def _fresh_ev(self, node) -> tuple:
        used = set()
        for A in node.ante + node.succ:
            used |= sx.eigenvariables(A)
        p = node.level
        while p in used:
            p += 1
        return ("ev", p)

    def _decide(self, node: ProofNode):
        """Fix the rule applied at ``node`` (or mark it an axiom)."""
        ax = axiom_of(self.system, self.alpha, node.ante, node.succ)
        if ax is not None:
            node.rule, node.axiom, node.arity = "Ax", ax, "none"
            return
        if node.forced is not None:
            node.rule = node.forced[0]
            node.cut = self._least_cut(node.base, node.ante + node.succ)
            node.arity = "finite"
            node.premises = (None, None) if node.cut is not None else (None,)
            return
        side, i = node.dagger
        B = (node.succ if side == "R" else node.ante)[i]
        node.principal = B
        k = B[0]
        ind = self.system.name == "inductive"
        fin_rule = lambda name, prem: (setattr(node, "rule", name),
                                       setattr(node, "arity", "finite"),
                                       setattr(node, "premises", tuple(prem)))
        if side == "R":
            if ind and k == "I":
                xi, t = B[1][1], B[2]
                Ps = tuple(self.system.P_I(a, t) for a in self._xs(node)
                           if self.alpha.lt(a, xi))
                C = self._least_cut(node, node.ante + Ps + node.succ)
                node.cut = C
                fin_rule("IR", [((C,), Ps, ()), ((), (C,) + Ps, ())])
            elif ind and k == "Ibar":
                t = B[1]
                Ps = (self.system.P_Ibar(t),) + tuple(self.system.P_I(a, t) for a in self._xs(node))
                C = self._least_cut(node, node.ante + Ps + node.succ)
                node.cut = C
                fin_rule("IbarR", [((C,), Ps, ()), ((), (C,) + Ps, ())])
            elif sx.is_atomic(B):
                self._cut(node, fin_rule)
            elif k == "and":
                fin_rule("AndR", [((), (B[1],), ()), ((), (B[2],), ())])
            elif k == "or":
                fin_rule("OrR", [((), (B[1], B[2]), ())])
            elif k == "not":
                fin_rule("NotR", [((B[1],), (), ())])
            elif k == "imp":
                fin_rule("ImpR", [((B[1],), (B[2],), ())])
            elif k == "forall" and B[1] == "N":
                if ind:
                    node.rule, node.arity = "ForallNR", "omega"
                else:
                    fin_rule("ForallR", [((), (sx.instantiate_body(B, self._fresh_ev(node)),), ())])
            elif k == "exists" and B[1] == "N":
                ts = self._term_list(node)
                fin_rule("ExistsNR" if ind else "ExistsR",
                         [((), tuple(sx.instantiate_body(B, t) for t in ts), ())])
            elif k == "forall":
                node.rule, node.arity = "ForallOrdR", "ordinal"
            else:
                fin_rule("ExistsOrdR",
                         [((), tuple(sx.instantiate_body(B, ("par", a)) for a in self._xs(node)), ())])
        else:
            if ind and k == "I":
                node.rule, node.arity = "IL", "ordinal"
            elif ind and k == "Ibar":
                node.rule, node.arity = "IbarL", "ordinal"
            elif sx.is_atomic(B):
                self._cut(node, fin_rule)
            elif k == "and":
                fin_rule("AndL", [((B[1], B[2]), (), ())])
            elif k == "or":
                fin_rule("OrL", [((B[1],), (), ()), ((B[2],), (), ())])
            elif k == "not":
                fin_rule("NotL", [((), (B[1],), ())])
            elif k == "imp":
                fin_rule("ImpL", [((), (B[1],), ()), ((B[2],), (), ())])
            elif k == "forall" and B[1] == "N":
                ts = self._term_list(node)
                fin_rule("ForallNL" if ind else "ForallL",
                         [(tuple(sx.instantiate_body(B, t) for t in ts), (), ())])
            elif k == "exists" and B[1] == "N":
                if ind:
                    node.rule, node.arity = "ExistsNL", "omega"
                else:
                    fin_rule("ExistsL", [((sx.instantiate_body(B, self._fresh_ev(node)),), (), ())])
            elif k == "forall":
                fin_rule("ForallOrdL",
                         [(tuple(sx.instantiate_body(B, ("par", a)) for a in self._xs(node)), (), ())])
            else:
                node.rule, node.arity = "ExistsOrdL", "ordinal"

    def _term_list(self, node):
        if self.system.name == "inductive":
            return [sx.numeral(i) for i in range(node.level)]
        return sx.terms("lk", node.level + 1)

    def _cut(self, node, fin_rule):
        C = self._least_cut(node, node.ante + node.succ)
        if C is None:
            fin_rule("Dup", [((), (), ())])
            return
        node.cut = C
        fin_rule("Cut", [((), (C,), ()), ((C,), (), ())])

    def _make(self, conc, actual, atom, ante_add, succ_add, extra):
        ante_new = conc.ante + tuple(ante_add)
        succ_new = tuple(succ_add) + conc.succ
        level = actual.level + 1
        params = actual.params | frozenset(extra)
        dagger, phase, stage = _advance(conc, len(ante_add), len(succ_add), ante_new,
                                        succ_new, level)
        nd = ProofNode(actual.position + (atom,), (ante_new, succ_new), level, dagger,
                       stage, phase, params, actual.conclusion_params + (params,))
        self._decide(nd)
        return nd

    def _child(self, node: ProofNode, atom) -> Optional[ProofNode]:
        if node.arity == "none":
            return None
        if not (isinstance(atom, tuple) and len(atom) == 2):
            return None
        tag, v = atom
        if node.forced is not None:
            if tag != "t" or v not in (0, 1) or not isinstance(v, int):
                return None
            _, eta, lhs, rhs = node.forced
            C = node.cut
            if C is None:
                ante_add, succ_add = lhs, rhs
            elif v == 0:
                ante_add, succ_add = lhs + (C,), rhs
            else:
                ante_add, succ_add = lhs, (C,) + rhs
            if C is None and v == 1:
                return None
            return self._make(node.base, node, atom, ante_add, succ_add, {eta})
        if node.arity == "finite":
            if tag != "t" or not isinstance(v, int) or isinstance(v, bool) or \
                    not 0 <= v < len(node.premises):
                return None
            a, s, extra = node.premises[v]
            return self._make(node, node, atom, a, s, extra)
        B = node.principal
        if node.arity == "omega":
            if tag != "t" or not isinstance(v, int) or isinstance(v, bool) or v < 0:
                return None
            inst = sx.instantiate_body(B, sx.numeral(v))
            if node.rule == "ForallNR":
                return self._make(node, node, atom, (), (inst,), ())
            return self._make(node, node, atom, (inst,), (), ())
        # ordinal
        if tag != "p" or not self.alpha.contains(v):
            return None
        if node.rule == "ForallOrdR":
            return self._make(node, node, atom, (), (sx.instantiate_body(B, ("par", v)),), {v})
        if node.rule == "ExistsOrdL":
            return self._make(node, node, atom, (sx.instantiate_body(B, ("par", v)),), (), {v})
        # I L / Ibar L: an intermediate node that is then cut
        if node.rule == "IL":
            xi, t = B[1], B[2]
            lhs = (self.system.P_I(v, t),)
            rhs = (("leqo", xi, ("par", v)),)
            name = "ILCut"
        else:
            t = B[1]
            lhs = (self.system.P_I(v, t),)
            rhs = ()
            name = "IbarLCut"
        params = node.params | {v}
        mid = ProofNode(node.position + (atom,), (node.ante + lhs, rhs + node.succ),
                        node.level + 1, None, node.stage, node.phase, params,
                        node.conclusion_params + (params,), base=node,
                        forced=(name, v, lhs, rhs))
        self._decide(mid)
        return mid


def generate(system: System, root, alpha: LinearOrder, **kw) -> Preproof:
    if isinstance(root, str):
        root = sx.parse_sequent(root) if root.strip().startswith("(seq") else parse_root(root)
    return Preproof(system, root, alpha, **kw)


def parse_root(text: str) -> tuple:
    """Either "(seq (..) (..))" or "A1, A2 |- B1, B2" with s-expression formulas."""
    text = text.strip()
    if text.startswith("(seq"):
        return sx.parse_sequent(text)
    if "|-" not in text:
        raise StructuralError("a root sequent needs '|-'")
    lhs, rhs = text.split("|-", 1)

    def side(s):
        out, depth, cur = [], 0, ""
        for ch in s:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                if cur.strip():
                    out.append(sx.parse_formula(cur))
                cur = ""
            else:
                cur += ch
        if cur.strip():
            out.append(sx.parse_formula(cur))
        return tuple(out)

    return side(lhs), side(rhs)


# ---------------------------------------------------------------- mutilation

class RelabeledPreproof:
    """Preproof over ``alpha`` answered through another preproof.

    ``to_src`` sends an alpha-parameter into the source order and
    ``from_src`` sends source parameters back (None when outside the range).
    """

    def __init__(self, src, alpha: LinearOrder, to_src: Callable, from_src: Callable):
        self.src = src
        self.alpha = alpha
        self.system = src.system
        self._to = to_src
        self._from = from_src

    def label(self, position):
        position = tuple(position)
        for a in position:
            if a[0] == "p" and not self.alpha.contains(a[1]):
                return None
        node = self.src.label(relabel_seq(position, self._to))
        if node is None:
            return None
        return _relabel_node(node, position, self._from)

    def child_atoms(self, position, breadth: int = 8) -> list:
        position = tuple(position)
        node = self.label(position)
        if node is None or node.arity == "none":
            return []
        if node.arity == "ordinal":
            xs = self.alpha.window(self.alpha.size if self.alpha.is_finite else breadth)
            return [("p", x) for x in xs if self.label(position + (("p", x),)) is not None]
        if node.arity == "omega":
            return [("t", k) for k in range(breadth)]
        return [("t", i) for i in range(len(node.premises))]

    def children(self, position, breadth: int = 8) -> list:
        position = tuple(position)
        return [self.label(position + (a,)) for a in self.child_atoms(position, breadth)]

    @property
    def root(self):
        return self.label(())


def _relabel_node(node: ProofNode, position, g) -> ProofNode:
    def f(xi):
        y = g(xi)
        if y is None:
            raise DomainError(f"parameter {xi!r} outside the range of the map")
        return y

    seq = (tuple(sx.relabel(A, f) for A in node.ante), tuple(sx.relabel(B, f) for B in node.succ))
    out = ProofNode(position, seq, node.level, node.dagger, node.stage, node.phase,
                    frozenset(f(x) for x in node.params),
                    tuple(frozenset(f(x) for x in X) for X in node.conclusion_params),
                    rule=node.rule, axiom=node.axiom,
                    principal=None if node.principal is None else sx.relabel(node.principal, f),
                    cut=None if node.cut is None else sx.relabel(node.cut, f),
                    arity=node.arity, premises=tuple(None for _ in node.premises))
    return out


def mutilate_preproof(pi, f: IncreasingMap) -> RelabeledPreproof:
    """^f pi for pi over f.codomain: a preproof over f.domain."""
    inv = {y: x for x, y in f.pairs()}
    return RelabeledPreproof(pi, f.domain, f, inv.get)


def instantiate_preproof(pi, alpha: LinearOrder) -> RelabeledPreproof:
    """Answer labels over alpha by collapsing positions into pi's order.

    pi must be generated over an order with enough elements (typically
    omega); the k-th smallest parameter of a position goes to the k-th
    element of pi's order.
    """
    src_elems = pi.alpha.window(pi.alpha.size if pi.alpha.is_finite else 256)

    class _Inst(RelabeledPreproof):
        def label(self, position):
            position = tuple(position)
            for a in position:
                if a[0] == "p" and not alpha.contains(a[1]):
                    return None
            ps = alpha.sorted(occ(position))
            if len(ps) > len(src_elems):
                return None
            fwd = {p: src_elems[i] for i, p in enumerate(ps)}
            back = {src_elems[i]: p for i, p in enumerate(ps)}
            node = pi.label(relabel_seq(position, fwd.__getitem__))
            if node is None:
                return None
            return _relabel_node(node, position, back.get)

    return _Inst(pi, alpha, None, None)


# ---------------------------------------------------------------- exploration

@dataclass
class Exploration:
    nodes: int = 0
    closed: bool = True              # every explored branch ended in an axiom
    open_leaves: list = field(default_factory=list)
    truncated: bool = False


def explore(pi, depth: int, breadth: int = 4, max_nodes: int = 50_000) -> Exploration:
    """Breadth-capped expansion to ``depth`` levels."""
    ex = Exploration()
    stack = [()]
    while stack:
        pos = stack.pop()
        node = pi.label(pos)
        ex.nodes += 1
        if ex.nodes > max_nodes:
            ex.truncated = True
            ex.closed = False
            break
        if node.arity == "none":
            continue
        if node.arity in ("omega",) or (node.arity == "ordinal" and not pi.alpha.is_finite):
            ex.truncated = True
        if len(pos) >= depth:
            ex.closed = False
            ex.open_leaves.append(pos)
            continue
        for a in reversed(pi.child_atoms(pos, breadth)):
            stack.append(pos + (a,))
    if ex.truncated:
        ex.closed = False
    return ex


def find_open_branch(pi, depth: int, breadth: int = 4, budget: int = 200_000,
                     guide=None) -> Optional[list]:
    """Leftmost root path of ``depth + 1`` non-axiom nodes, by depth-first search.

    With a ``guide`` structure, children whose sequent the structure refutes
    are tried first; this only reorders the search.
    """
    stack = [()]
    spent = 0
    while stack:
        pos = stack.pop()
        spent += 1
        if spent > budget:
            raise BudgetError(f"no open branch of depth {depth} within {budget} nodes")
        node = pi.label(pos)
        if node is None or node.arity == "none":
            continue
        if len(pos) == depth:
            return [pi.label(pos[:i]) for i in range(depth + 1)]
        atoms = pi.child_atoms(pos, breadth)
        if guide is not None:
            atoms.sort(key=lambda a: not guide.refutes(pi.label(pos + (a,)).sequent))
        for a in reversed(atoms):
            stack.append(pos + (a,))
    return None


# ---------------------------------------------------------------- Den

def den(pi: Preproof, breadth: int = 4) -> Prequasidendroid:
    """The proof quasidendroid: positions interleaved with the top term inf.

    ``pi`` should be generated over omega; labels of collapsed positions
    answer every instantiation.
    """
    top = ("t", INF)

    def split(c):
        if any(c[i] != top for i in range(1, len(c), 2)):
            return None
        if any(c[i] == top for i in range(0, len(c), 2)):
            return None
        return c[0::2]

    def hull(c):
        p = split(c)
        return p is not None and pi.label(p) is not None

    def member(c):
        if len(c) % 2:
            return False
        p = split(collapse(c))
        if p is None:
            return False
        node = pi.label(p)
        return node is not None and node.arity == "none"

    def children_at(alpha, seq, b):
        c = collapse(seq, alpha)
        if not hull(c):
            return []
        if len(seq) % 2:
            return [top]
        node = pi.label(c[0::2])
        if node.arity == "none":
            return []
        if node.arity == "ordinal":
            xs = alpha.window(alpha.size if alpha.is_finite else b)
            return [("p", x) for x in xs if hull(collapse(seq + (("p", x),), alpha))][:b]
        return pi.child_atoms(c[0::2], min(b, breadth) if node.arity == "omega" else b)

    return Prequasidendroid(OmegaPlusOne(), member, hull, name="den",
                            children_at=children_at)


def interleave(position) -> tuple:
    out = []
    for a in position:
        out.extend([a, ("t", INF)])
    return tuple(out)


# ---------------------------------------------------------------- models

@dataclass
class PartialModel:
    true_atoms: set = field(default_factory=set)
    false_atoms: set = field(default_factory=set)
    ord_universe: set = field(default_factory=set)
    term_universe: set = field(default_factory=set)

    def to_json(self) -> dict:
        return {"true_atoms": sorted(sx.render(A) for A in self.true_atoms),
                "false_atoms": sorted(sx.render(A) for A in self.false_atoms),
                "ord_universe": sorted(self.ord_universe, key=repr),
                "term_universe": sorted(sx.render_term(t) for t in self.term_universe)}


def _atom_terms(A):
    k = A[0]
    if k in ("=", "le"):
        return [A[1], A[2]]
    if k in ("I",):
        return [A[2]]
    if k in ("Ibar", "X"):
        return [A[1]]
    if k == "pred":
        return list(A[2])
    return []


def extract_model(branch) -> PartialModel:
    m = PartialModel()
    for node in branch:
        for A in node.ante:
            if sx.is_atomic(A):
                m.true_atoms.add(A)
        for B in node.succ:
            if sx.is_atomic(B):
                m.false_atoms.add(B)
        m.ord_universe |= node.occ()
    clash = m.true_atoms & m.false_atoms
    if clash:
        raise BranchInvalidError("atoms on both sides: " +
                                 ", ".join(sorted(sx.render(A) for A in clash)))
    for A in m.true_atoms | m.false_atoms:
        m.term_universe.update(_atom_terms(A))
    return m


# ---------------------------------------------------------------- branch lemmas

def check_branch_lemmas(pi, branch, depth: Optional[int] = None) -> dict:
    """Bounded checks along a root path (a list of nodes, root first).

    a: stage numbers follow the replay pattern (count down to 0, then jump
       to the current level) and every stage value seen recurs as predicted;
    b: antecedent grows at the end and succedent at the front;
    c: a nonempty side shows an atomic formula somewhere in the prefix;
    d: no formula on both sides of a non-axiom node.
    """
    nodes = list(branch if depth is None else branch[:depth + 1])
    rep = {"a": [], "b": [], "c": [], "d": [], "length": len(nodes),
           "terminated": bool(nodes) and nodes[-1].arity == "none"}
    prev_stage = None
    for k in range(1, len(nodes)):
        x, y = nodes[k - 1], nodes[k]
        if y.dagger is None or x.dagger is None:
            continue
        if y.stage != x.stage:
            want = x.stage - 1 if x.stage > 0 else y.level
            if y.stage != want:
                rep["a"].append({"level": y.level, "stage": y.stage, "expected": want})
        if y.stage > y.level:
            rep["a"].append({"level": y.level, "stage": y.stage, "expected": "<= level"})
    for k in range(1, len(nodes)):
        x, y = nodes[k - 1], nodes[k]
        if y.ante[:len(x.ante)] != x.ante or y.succ[len(y.succ) - len(x.succ):] != x.succ:
            rep["b"].append({"level": y.level})
    for side in (0, 1):
        seen_nonempty = any(n.sequent[side] for n in nodes)
        seen_atomic = any(sx.is_atomic(A) for n in nodes for A in n.sequent[side])
        if seen_nonempty and not seen_atomic:
            rep["c"].append({"side": "ante" if side == 0 else "succ"})
    for n in nodes:
        if n.arity != "none" and set(n.ante) & set(n.succ):
            rep["d"].append({"level": n.level})
    rep["ok"] = not (rep["a"] or rep["b"] or rep["c"] or rep["d"])
    return rep
