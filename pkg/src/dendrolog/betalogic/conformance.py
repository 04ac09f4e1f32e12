"""Check expanded nodes of a preproof against the shipped case table."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Optional

from . import syntax as sx
from .engine import axiom_of


@lru_cache(maxsize=1)
def case_table() -> dict:
    text = resources.files(__package__).joinpath("case_table.json").read_text()
    return json.loads(text)


def _principal_kind(system: str, B) -> str:
    k = sx.kind(B)
    if system == "inductive" and k in ("I", "Ibar"):
        return k
    if sx.is_atomic(B):
        return "atomic"
    return k


def _expand(sym: str, ctx: dict) -> Optional[list]:
    """Formulas a pattern symbol stands for; None if not determinable."""
    B, pi, node = ctx["B"], ctx["pi"], ctx["node"]
    if sym == "B0":
        return [sx.immediate_parts(B)[0]]
    if sym == "B1":
        return [sx.immediate_parts(B)[1]]
    if sym == "C":
        return [ctx["C"]] if ctx.get("C") is not None else None
    if sym == "B0[terms]":
        return [sx.instantiate_body(B, t) for t in sx.terms("lk", node.level + 1)]
    if sym == "B0[numerals]":
        return [sx.instantiate_body(B, sx.numeral(i)) for i in range(node.level)]
    if sym == "B0[X_s]":
        return [sx.instantiate_body(B, ("par", a)) for a in ctx["xs"]]
    if sym == "B0[xi]":
        return [sx.instantiate_body(B, ("par", ctx["index"]))]
    if sym == "B0[k]":
        return [sx.instantiate_body(B, sx.numeral(ctx["index"]))]
    if sym == "B0[fresh]":
        return [ctx["fresh"]] if ctx.get("fresh") is not None else None
    t = B[2] if B is not None and B[0] == "I" else (B[1] if B is not None else None)
    S = pi.system
    if sym == "P(I[X_s<xi],t)":
        return [S.P_I(a, t) for a in ctx["xs"] if pi.alpha.lt(a, B[1][1])]
    if sym == "P(I[X_s],t)":
        return [S.P_I(a, t) for a in ctx["xs"]]
    if sym == "P(Ibar,t)":
        return [S.P_Ibar(t)]
    if sym == "P(I[xi],t)":
        return [S.P_I(ctx["index"], t)]
    if sym == "xi0<=xi":
        return [("leqo", B[1], ("par", ctx["index"]))]
    raise KeyError(sym)


def _side_matches(pattern, conc_side, child_side, ctx, front: bool):
    """Does child_side equal conc_side extended by the pattern?"""
    if len(child_side) < len(conc_side):
        return False
    n_add = len(child_side) - len(conc_side)
    added = child_side[:n_add] if front else child_side[len(conc_side):]
    rest = child_side[n_add:] if front else child_side[:len(conc_side)]
    if rest != conc_side:
        return False
    # the first added C or fresh instance is read off the child, then checked
    exp = []
    for sym in pattern:
        got = _expand(sym, ctx)
        if got is None:
            if sym == "C" and len(added) > len(exp):
                ctx["C"] = added[len(exp)]
                got = [ctx["C"]]
            elif sym == "B0[fresh]" and len(added) > len(exp):
                ctx["fresh"] = added[len(exp)]
                got = [ctx["fresh"]]
            else:
                return False
        exp.extend(got)
    return tuple(exp) == tuple(added)


def check_node(pi, position, breadth: int = 3) -> list:
    """Problems at one expanded node; empty when it conforms."""
    position = tuple(position)
    node = pi.label(position)
    if node is None:
        return [f"no node at {position}"]
    problems = []
    sysname = pi.system.name
    ax = axiom_of(pi.system, pi.alpha, node.ante, node.succ)
    if node.arity == "none":
        if ax is None:
            problems.append("terminal node without an axiom")
        if pi.child_atoms(position, breadth):
            problems.append("axiom node has children")
        return problems
    if ax is not None:
        problems.append(f"axiom {ax} not closed off")

    # ---- locate the conclusion the portion acts on
    if node.dagger is None:
        parent = pi.label(position[:-1])
        conc, B, side_name = parent, parent.principal, "forced"
        kind_name = "none"
        xs = pi.alpha.sorted(parent.conclusion_params[parent.stage])
    else:
        side, i = node.dagger
        B = (node.succ if side == "R" else node.ante)[i]
        conc, side_name = node, side
        kind_name = _principal_kind(sysname, B)
        xs = pi.alpha.sorted(node.conclusion_params[node.stage])

    matches = []
    for entry in case_table()["portions"]:
        if sysname not in entry["systems"]:
            continue
        if entry["side"] not in (side_name, "any") or (entry["side"] == "any" and side_name == "forced"):
            continue
        if entry["principal"] != kind_name:
            continue
        if entry["side"] == "forced" and entry["id"] != node.rule:
            continue
        if _portion_matches(pi, position, node, conc, B, entry, xs, breadth):
            matches.append(entry["id"])
    if len(matches) != 1:
        problems.append(f"rule {node.rule} matches portions {matches}")
    elif matches[0] != node.rule:
        problems.append(f"rule {node.rule} recorded but portion {matches[0]} found")
    return problems


def _portion_matches(pi, position, node, conc, B, entry, xs, breadth) -> bool:
    arity = entry["arity"]
    if arity == "finite":
        atoms = [("t", i) for i in range(len(entry["premises"]))]
        if pi.child_atoms(position, breadth + len(atoms)) != atoms:
            return False
        specs = list(zip(atoms, entry["premises"]))
    elif arity == "omega":
        if node.arity != "omega":
            return False
        specs = [(("t", k), entry["premises"][0]) for k in range(breadth)]
    else:
        if node.arity != "ordinal":
            return False
        elems = pi.alpha.window(pi.alpha.size if pi.alpha.is_finite else breadth)[:breadth]
        specs = [(("p", x), entry["premises"][0]) for x in elems]
    base = conc if node.dagger is None else node
    ctx_C = {}
    for atom, prem in specs:
        child = pi.label(position + (atom,))
        if child is None or child.level != node.level + 1:
            return False
        ctx = {"B": B, "pi": pi, "node": base, "xs": xs, "index": atom[1], "C": ctx_C.get("C")}
        if node.dagger is None:
            ctx["node"] = node
        if not _side_matches(prem["ante"], node.ante, child.ante, ctx, front=False):
            return False
        if not _side_matches(prem["succ"], node.succ, child.succ, ctx, front=True):
            return False
        if ctx.get("C") is not None:
            if ctx_C.get("C") not in (None, ctx["C"]):
                return False
            ctx_C["C"] = ctx["C"]
        if ctx.get("fresh") is not None:
            ev = ctx["fresh"]
            want = sx.instantiate_body(B, ("ev", _ev_index(ev, B)))
            if want != ev:
                return False
            used = set()
            for A in node.ante + node.succ:
                used |= sx.eigenvariables(A)
            if _ev_index(ev, B) in used:
                return False
        want_params = node.params | ({atom[1]} if entry.get("adds") else set())
        if child.params != want_params:
            return False
        if entry.get("then") and child.rule not in (entry["then"], "Ax"):
            return False
    if entry["id"] in ("Cut", "IR", "IbarR", "ILCut", "IbarLCut"):
        C = ctx_C.get("C")
        if C is None:
            return False
        if entry["id"] in ("IR", "IbarR"):
            first = pi.label(position + (("t", 0),))
            avoid = node.ante + node.succ + first.succ[:len(first.succ) - len(node.succ)]
        else:
            avoid = node.ante + node.succ
        least = sx.least_new_formula(pi.system.name, xs, avoid)
        if least != C or not sx.params(C) <= set(xs):
            return False
    if entry["id"] == "Dup":
        if sx.least_new_formula(pi.system.name, xs, node.ante + node.succ,
                                limit=pi.cut_limit) is not None:
            return False
    return True


def _ev_index(inst, Q) -> int:
    """The eigenvariable index used when ``inst`` instantiates ``Q``."""
    evs = sx.eigenvariables(inst) - sx.eigenvariables(Q)
    return min(evs) if evs else -1


def check_preproof(pi, depth: int, breadth: int = 3, max_nodes: int = 2000) -> dict:
    """Run ``check_node`` on every node reachable within depth and breadth."""
    out = {"checked": 0, "problems": []}
    stack = [()]
    while stack and out["checked"] < max_nodes:
        pos = stack.pop()
        node = pi.label(pos)
        if node is None:
            continue
        out["checked"] += 1
        probs = check_node(pi, pos, breadth)
        if probs:
            out["problems"].append({"position": list(pos), "rule": node.rule, "problems": probs})
        if len(pos) < depth:
            stack.extend(pos + (a,) for a in pi.child_atoms(pos, breadth))
    return out
