"""Command line front end.

Exit status: 0 on success, 2 on usage or validation errors, 3 when a
subcommand that needs an answer runs out of budget.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import oracle as orc
from .betalogic import engine as eng
from .betalogic import syntax as sx
from .dendroid import (check_laws, inhomogeneous_mutant, lin_star, random_pattern_dendroid,
                       seq_to_json)
from .dilator import check_predilator
from .errors import (BudgetError, DendrologError, DomainError, StructuralError,
                     ValidationError)
from .genedendron import (KERNELS, altitude_bounded, approximate_real, hj_genedendron,
                          longest_prefix, shoenfield)
from .impdil import (ImpConfig, a_embedding, check_clause_ii, embed_b, imp_predilator,
                     restricted_code, search_branch)
from .notation import Bounds, m_hierarchy
from .order import parse_order

SCHEMA = "dendrolog/1"
EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class _Budget(Exception):
    pass


def _default_budget(fallback: int) -> int:
    v = os.environ.get("DENDROLOG_DEFAULT_BUDGET")
    if v is None:
        return fallback
    try:
        n = int(v)
    except ValueError:
        raise ValidationError(f"DENDROLOG_DEFAULT_BUDGET={v!r} is not a number")
    if n < 1:
        raise ValidationError("DENDROLOG_DEFAULT_BUDGET must be positive")
    return n


def _positive(s: str) -> int:
    n = int(s)
    if n < 1:
        raise argparse.ArgumentTypeError(f"{s} is not >= 1")
    return n


def _natural(s: str) -> int:
    n = int(s)
    if n < 0:
        raise argparse.ArgumentTypeError(f"{s} is negative")
    return n


def _order(s: str):
    try:
        return parse_order(s)
    except StructuralError as exc:
        raise argparse.ArgumentTypeError(str(exc))


# ---------------------------------------------------------------- codes

def parse_code(s: str) -> orc.Code:
    """fin:N, omega, omegastar, R:<code> (restricted to the real), a JSON
    code, or a code index."""
    s = s.strip()
    if s.startswith("R:"):
        return restricted_code(parse_code(s[2:]))
    if s.startswith("fin:"):
        return orc.fin_order_code(int(s[4:]))
    if s == "omega":
        return orc.omega_code()
    if s in ("omegastar", "omega_star"):
        return orc.omega_star_code()
    if s.startswith("["):
        return orc.from_json(json.loads(s))
    if s.isdigit():
        return orc.decode(int(s))
    raise ValidationError(f"bad code {s!r}")


# ---------------------------------------------------------------- subcommands

def _system(args):
    return eng.system_from_name(args.system, args.template)


def cmd_preproof(args):
    system = _system(args)
    root = eng.parse_root(args.root)
    if args.via_omega:
        from .order import Omega
        pi = eng.instantiate_preproof(eng.generate(system, root, Omega()), args.alpha)
    else:
        pi = eng.generate(system, root, args.alpha)
    nodes = []
    stack = [()]
    while stack:
        pos = stack.pop()
        node = pi.label(pos)
        if node is None:
            continue
        nodes.append(node.to_json())
        if len(pos) < args.depth:
            stack.extend(pos + (a,) for a in reversed(pi.child_atoms(pos, args.breadth)))
    return {"schema": SCHEMA, "command": "preproof", "system": system.name,
            "alpha": args.alpha.to_json(), "root": _render_root(root), "nodes": nodes}


def _render_root(root):
    return {"ante": [sx.render(A) for A in root[0]], "succ": [sx.render(A) for A in root[1]]}


def _open_branch(args):
    system = _system(args)
    root = eng.parse_root(args.root)
    pi = eng.generate(system, root, args.alpha)
    guide = None
    if args.alpha.is_finite:
        from .betalogic.semantics import standard
        guide = standard(args.alpha, 8, system.template)
    try:
        br = eng.find_open_branch(pi, args.depth, args.breadth, args.budget, guide=guide)
    except BudgetError as exc:
        raise _Budget(str(exc))
    return system, root, pi, br


def cmd_branch(args):
    system, root, pi, br = _open_branch(args)
    out = {"schema": SCHEMA, "command": "branch", "system": system.name,
           "alpha": args.alpha.to_json(), "root": _render_root(root), "found": br is not None}
    if br is None:
        out["closed"] = True
        return out
    out["branch"] = [n.to_json() for n in br]
    lem = eng.check_branch_lemmas(pi, br)
    out["lemmas"] = {k: (len(v) if isinstance(v, list) else v) for k, v in lem.items()}
    return out


def cmd_model(args):
    system, root, pi, br = _open_branch(args)
    out = {"schema": SCHEMA, "command": "model", "system": system.name,
           "alpha": args.alpha.to_json(), "root": _render_root(root), "found": br is not None}
    if br is not None:
        out["model"] = eng.extract_model(br).to_json()
    return out


def _genedendron(args):
    if args.hj is not None:
        return hj_genedendron(args.hj)
    return shoenfield(KERNELS[args.kernel]())


def cmd_gened(args):
    g = _genedendron(args)
    if args.action == "approx":
        bits = approximate_real(g, args.alpha, args.depth, args.breadth, args.budget)
        return {"schema": SCHEMA, "command": "gened approx", "genedendron": g.dend.name,
                "alpha": args.alpha.to_json(), "depth": args.depth,
                "bits": {str(k): v for k, v in sorted(bits.items())}}
    probes = [parse_order(p) for p in args.probes.split(",")] if args.probes else [args.alpha]
    r = altitude_bounded(g, probes, args.depth, args.breadth)
    return {"schema": SCHEMA, "command": "gened altitude", "genedendron": g.dend.name,
            "probes": [p.to_json() for p in probes], "depth": args.depth,
            "index": r, "found": r is not None}


def _imp_config(args) -> ImpConfig:
    return ImpConfig(parse_code(args.a), parse_code(args.b), budget=args.code_budget,
                     f_window=args.f_window, g_window=args.g_window,
                     step_breadth=args.step_breadth)


def cmd_imp(args):
    cfg = _imp_config(args)
    g = shoenfield(KERNELS[args.kernel]())
    out = {"schema": SCHEMA, "command": f"imp {args.action}", "genedendron": g.dend.name,
           "a": orc.to_json(cfg.a_code), "b": orc.to_json(cfg.b_code)}
    if args.action == "check":
        r = search_branch(g, cfg, args.x, args.depth, args.budget)
        out.update({"x": args.x.to_json(), "depth": args.depth, "search": r.to_json()})
        if args.clause_ii:
            out["clause_ii"] = check_clause_ii(g, cfg, args.x, args.depth,
                                               search_budget=args.budget)
        return out
    betas = [int(b) for b in args.enum.split(",") if b.strip()]
    k = len(betas)
    sigma = longest_prefix(g, args.x, 2 * k, budget=args.budget)
    gs = a_embedding(cfg, args.x, k, g.extract(args.x, sigma))
    if gs is None:
        raise BudgetError(f"{args.x.kind} order is too small for a(R)")
    nodes = embed_b(sigma, gs, betas, cfg)
    out.update({"x": args.x.to_json(), "branch": seq_to_json(sigma), "g": list(gs),
                "nodes": [n.to_json() for n in nodes]})
    return out


def cmd_notation(args):
    bounds = Bounds(universe=args.universe, budget=args.budget, qbound=args.qbound)
    levels = m_hierarchy(args.op, args.levels, bounds, args.x)
    return {"schema": SCHEMA, "command": "notation run", "op": args.op,
            "bounds": {"universe": bounds.universe, "budget": bounds.budget,
                       "qbound": bounds.qbound},
            "levels": [{"level": i, **lv} for i, lv in enumerate(levels)]}


def cmd_laws(args):
    rng = random.Random(args.seed)
    out = {"schema": SCHEMA, "command": "laws", "module": args.module, "seed": args.seed}
    if args.module == "dendroid":
        total = {}
        caught = 0
        for i in range(args.samples):
            D = random_pattern_dendroid(rng)
            for law, v in check_laws(D, n_max=3, seed=i).summary().items():
                t = total.setdefault(law, {"checked": 0, "violations": 0})
                t["checked"] += v["checked"]
                t["violations"] += v["violations"]
        mutants = min(args.samples, 20)
        for i in range(mutants):
            M = inhomogeneous_mutant(random_pattern_dendroid(rng))
            caught += not check_laws(M, n_max=3, seed=i).ok
        out.update({"laws": total, "mutants": mutants, "mutants_caught": caught})
        out["ok"] = all(v["violations"] == 0 for v in total.values())
    elif args.module == "lin_star":
        D = random_pattern_dendroid(rng)
        rep = check_predilator(lin_star(D), sample_budget=args.samples, seed=args.seed)
        bad = check_predilator(lin_star(D, order_broken=True), sample_budget=args.samples,
                               seed=args.seed)
        out.update({"laws": rep.summary(), "mutant_monotonicity_fails":
                    bad.failed("monotonicity")})
        out["ok"] = rep.ok
    elif args.module == "imp":
        cfg = ImpConfig(orc.fin_order_code(2), restricted_code(orc.omega_star_code()),
                        f_window=3, g_window=4, step_breadth=8)
        rep = check_predilator(imp_predilator(shoenfield(KERNELS["evens"]()), cfg),
                               sample_budget=min(args.samples, 60), seed=args.seed,
                               max_size=3, elem_limit=40)
        out.update({"laws": rep.summary(), "ok": rep.ok})
    else:
        rep = orc.check_kernel(args.samples, args.seed)
        out.update({k: v for k, v in rep.items() if k != "failures"})
        out["ok"] = not rep["failures"]
    return out


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    budget = _default_budget(200_000)
    p = argparse.ArgumentParser(prog="dendrolog", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="indented output")
    sub = p.add_subparsers(dest="cmd", required=True)

    def proof_flags(q, depth):
        q.add_argument("--system", choices=["lk", "inductive"], default="lk")
        q.add_argument("--template", default=None, help="operator template P(X,x)")
        q.add_argument("--root", required=True)
        q.add_argument("--alpha", type=_order, default=parse_order("fin:1"))
        q.add_argument("--depth", type=_natural, default=depth)
        q.add_argument("--breadth", type=_positive, default=3)
        q.add_argument("--budget", type=_positive, default=budget)

    q = sub.add_parser("preproof", help="dump a breadth-capped preproof as JSON")
    proof_flags(q, 8)
    q.add_argument("--via-omega", action="store_true",
                   help="generate over omega and instantiate to --alpha")
    q.set_defaults(fn=cmd_preproof)

    q = sub.add_parser("branch", help="leftmost open branch and its lemma report")
    proof_flags(q, 40)
    q.set_defaults(fn=cmd_branch)

    q = sub.add_parser("model", help="partial model read off an open branch")
    proof_flags(q, 40)
    q.set_defaults(fn=cmd_model)

    q = sub.add_parser("gened", help="genedendron queries")
    q.add_argument("action", choices=["approx", "altitude"])
    q.add_argument("--kernel", choices=sorted(KERNELS), default="evens")
    q.add_argument("--hj", default=None, metavar="TEMPLATE",
                   help="use the inductive-system genedendron for this template")
    q.add_argument("--alpha", type=_order, default=parse_order("fin:1"))
    q.add_argument("--probes", default=None, help="comma-separated orders")
    q.add_argument("--depth", type=_natural, default=12)
    q.add_argument("--breadth", type=_positive, default=8)
    q.add_argument("--budget", type=_positive, default=budget)
    q.set_defaults(fn=cmd_gened)

    q = sub.add_parser("imp", help="implicational predilator checks")
    q.add_argument("action", choices=["check", "embed"])
    q.add_argument("--kernel", choices=sorted(KERNELS), default="evens")
    q.add_argument("--a", default="fin:3")
    q.add_argument("--b", default="fin:5")
    q.add_argument("--x", type=_order, default=parse_order("fin:4"))
    q.add_argument("--depth", type=_natural, default=15)
    q.add_argument("--budget", type=_positive, default=20_000)
    q.add_argument("--code-budget", type=_positive, default=2_000)
    q.add_argument("--f-window", type=_positive, default=16)
    q.add_argument("--g-window", type=_positive, default=4)
    q.add_argument("--step-breadth", type=_positive, default=2)
    q.add_argument("--enum", default="0,1,2", help="b(R) field for embed, N-increasing")
    q.add_argument("--clause-ii", action="store_true")
    q.set_defaults(fn=cmd_imp)

    q = sub.add_parser("notation", help="bounded notation hierarchies")
    q.add_argument("action", choices=["run"])
    q.add_argument("--op", choices=["R", "J", "Jx"], default="J")
    q.add_argument("--x", type=_natural, default=None)
    q.add_argument("--levels", type=_natural, default=4)
    q.add_argument("--universe", type=_positive, default=64)
    q.add_argument("--budget", type=_positive, default=200)
    q.add_argument("--qbound", type=_positive, default=16)
    q.set_defaults(fn=cmd_notation)

    q = sub.add_parser("laws", help="sampled law checks")
    q.add_argument("--module", choices=["dendroid", "lin_star", "imp", "oracle"],
                   default="dendroid")
    q.add_argument("--samples", type=_positive, default=200)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(fn=cmd_laws)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except ValidationError as exc:
        print(f"dendrolog: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.fn(args)
    except (_Budget, BudgetError) as exc:
        print(f"dendrolog: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValidationError, StructuralError, DomainError, ValueError) as exc:
        print(f"dendrolog: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DendrologError as exc:
        print(f"dendrolog: {exc}", file=sys.stderr)
        return EXIT_INVALID
    json.dump(result, sys.stdout, sort_keys=True, indent=2 if args.pretty else None,
              default=_jsonable)
    sys.stdout.write("\n")
    return EXIT_OK


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x, key=repr)
    if isinstance(x, tuple):
        return list(x)
    return repr(x)


if __name__ == "__main__":
    sys.exit(main())
