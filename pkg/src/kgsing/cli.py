"""Command-line front end.

    kgsing analyze [FILE|-] [--codim] [--determinacy] [--reduce] [--classify]
                   [--versal] [--audit]
    kgsing audit c1-dtlz1 --M 3 --k 1 [--y 0.5 ...]
    kgsing audit c2-dtlz2 --M 3 --k 2 --l 1
    kgsing tables verify

Common flags: --max-degree, --mode, --tol, --budget, --format, --jobs; each
has an environment override KGSING_<FLAG>.  Exit status: 0 ok, 1 error,
2 non-generic audit verdict.
"""

import argparse
from fractions import Fraction
import sys

from . import __version__, bench, config, report
from .analysis import (check_versal, determinacy_order, extended_codim, is_submersion,
                       kg_codim, kge_codim)
from .classify import classify, verdict_for_germ
from .errors import KGError
from .germ import activate, full_reduce
from .parse import parse_document
from .ring import VecPoly, format_poly, translate

EXIT_OK, EXIT_ERROR, EXIT_NONGENERIC = 0, 1, 2
COMMANDS = ("reduce", "codim", "determinacy", "classify", "versal", "audit")
DEFAULT_COMMANDS = ("reduce", "codim", "determinacy", "classify")


def _num(v):
    if isinstance(v, Fraction) or isinstance(v, int):
        return Fraction(v)
    return float(v)


def _fmt_monomial(comp, e, names):
    mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k)
    return f"{mono + '*' if mono else ''}e{comp + 1}"


def _codim_tree(res, names):
    return {"value": res.value, "certified": res.certified, "degree": res.degree,
            "quotient_basis": [_fmt_monomial(i, e, names) for i, e in res.quotient_basis]}


def _germ_tree(germ):
    return {"nvars": germ.nvars, "vars": list(germ.names),
            "g": [format_poly(p, germ.names) for p in germ.g],
            "h": [format_poly(p, germ.names) for p in germ.h]}


def _trace_tree(germ):
    out = []
    for st in germ.provenance:
        out.append({"kind": st.kind, **{k: list(v) if isinstance(v, tuple) else v
                                        for k, v in st.data}})
    return out


def _classification_tree(res, names):
    t = {"table": res.table if isinstance(res.table, str) else int(res.table),
         "label": res.label, "reason": res.reason,
         "stratum_codim": res.stratum_codim, "stratum_lower_bound": res.stratum_lower_bound,
         "generic": res.generic}
    params = {}
    for k, v in res.params.items():
        if isinstance(v, dict):
            params[k] = {str(a): _num(b) for a, b in v.items()}
        elif isinstance(v, tuple):
            params[k] = [_num(x) for x in v]
        elif isinstance(v, (int, float, Fraction)):
            params[k] = _num(v)
        else:
            params[k] = str(v)
    t["params"] = params
    if res.orbit_codim is not None:
        t["orbit_codim"] = res.orbit_codim.value
    if res.determinacy is not None:
        t["determinacy"] = res.determinacy.order
    rn = res.reduced.names if res.reduced is not None else names
    t["unfolding_generators"] = [
        " + ".join(f"({format_poly(c, rn)})*e{i + 1}" for i, c in enumerate(v) if not c.is_zero())
        for v in res.unfolding_generators]
    t["margins"] = [{"name": d.name, "value": _num(d.value), "zero": d.zero}
                    for d in res.margins]
    return t


def _family_directions(doc, germ, tol):
    """d(g,h)/du at u = 0 on the activated components, centred at the point."""
    active = dict(germ.provenance[0].data)["active"]
    q0 = len(doc.system.g)
    point = doc.system.base_point
    out = []
    for vec in doc.directions():
        comps = [vec[i] for i in active] + [vec[q0 + j] for j in range(len(doc.system.h))]
        out.append(VecPoly([translate(c, point) for c in comps]))
    return out


def analyze(text, cfg, commands):
    doc = parse_document(text, cfg.numeric_tol)
    system = doc.system
    names = system.names
    tree = {"schema": report.SCHEMA, "engine": __version__,
            "input": {"vars": list(names), "params": list(doc.params),
                      "point": [_num(v) for v in system.base_point],
                      "mode": cfg.mode, "tol": cfg.tol if cfg.mode == "approx" else None,
                      "budget": cfg.budget, "max_degree": cfg.max_degree,
                      "commands": list(commands)}}
    germ = activate(system)
    red = full_reduce(germ)
    tree["activation"] = {"q": germ.q, "r": germ.r,
                          "active": list(dict(germ.provenance[0].data)["active"])}
    status = EXIT_OK
    if "reduce" in commands:
        tree["reduction"] = {"germ": _germ_tree(red), "trace": _trace_tree(red),
                             "submersion": red.p == 0 or is_submersion(red)}
    if "codim" in commands:
        e = kge_codim(germ, cfg.max_degree)
        er = kge_codim(red, cfg.max_degree)
        sub = germ.p == 0 or is_submersion(germ)
        k = kg_codim(germ, cfg.max_degree, check=not sub)
        tree["codim"] = {"kge": _codim_tree(e, names), "kge_reduced": _codim_tree(er, red.names),
                         "kg": _codim_tree(k, names)}
    if "determinacy" in commands:
        d = determinacy_order(germ, cfg.max_degree)
        node = {"order": d.order, "certified": d.certified, "searched_to": d.searched_to,
                "criterion": d.criterion}
        if d.certified and germ.p and not is_submersion(germ) and (
                germ.trunc is None or germ.trunc >= d.order):
            node["extended_codim"] = extended_codim(germ, d.order)
        tree["determinacy"] = node
    if "classify" in commands:
        res = classify(germ, cfg.budget, cfg.max_degree)
        tree["classification"] = _classification_tree(res, names)
    dirs = _family_directions(doc, germ, cfg.numeric_tol) if doc.has_family else None
    if "versal" in commands:
        if dirs is None:
            raise KGError("versality needs a 'params' section")
        vr = check_versal(germ, dirs, cfg.max_degree)
        tree["versal"] = {"versal": vr.versal, "quotient_dim": vr.quotient_dim,
                          "spanned": vr.spanned_dim,
                          "missing": [_fmt_monomial(i, e, names) for i, e in vr.missing]}
    if "audit" in commands:
        v = verdict_for_germ(germ, cfg.budget, cfg.max_degree, dirs)
        tree["audit"] = {"status": v.status, "label": v.label, "reason": v.reason,
                         "conditions": dict(v.conditions),
                         "versal": None if v.versal is None else v.versal.versal}
        if v.status == "non-generic":
            status = EXIT_NONGENERIC
    return tree, status


def _audit_tree(res):
    facts = {}
    for k, v in res.facts.items():
        if k == "codim_by_degree":
            facts[k] = {str(m): {"lower_bound": b, "certified": c} for m, (b, c) in v.items()}
        elif k == "differentials":
            facts[k] = [[_num(x) for x in row] for row in v]
        elif k == "quotient_basis":
            facts[k] = [f"{e}*e{i + 1}" for i, e in v]
        elif isinstance(v, tuple) and len(v) == 2 and isinstance(v[1], bool):
            facts[k] = {"value": v[0], "certified": v[1]}
        elif isinstance(v, tuple):
            facts[k] = list(v)
        else:
            facts[k] = v if isinstance(v, (bool, int, float, str, type(None))) else str(v)
    params = {k: (list(map(_num, v)) if isinstance(v, tuple) else _num(v))
              for k, v in res.params.items()}
    return {"schema": report.SCHEMA, "engine": __version__, "benchmark": res.name,
            "params": params, "verdict": res.verdict, "margins_ok": res.ok,
            "min_margin": res.min_margin, "margin_floor": res.margin_floor,
            "facts": facts, "messages": list(res.messages)}


def _print_text(tree, out, indent=0):
    pad = "  " * indent
    for k, v in tree.items():
        if isinstance(v, dict):
            out.write(f"{pad}{k}:\n")
            _print_text(v, out, indent + 1)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.write(f"{pad}{k}:\n")
            for i, item in enumerate(v):
                out.write(f"{pad}  - [{i}]\n")
                _print_text(item, out, indent + 2)
        elif isinstance(v, list):
            out.write(f"{pad}{k}: {', '.join(str(x) for x in v) if v else '(none)'}\n")
        else:
            out.write(f"{pad}{k}: {v}\n")


def _emit(tree, cfg, out):
    if cfg.format == "structured":
        out.write(report.dumps(tree))
    else:
        _print_text(tree, out)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, dest="max_degree")
    common.add_argument("--mode", choices=("exact", "approx"))
    common.add_argument("--tol", type=float)
    common.add_argument("--budget", type=int)
    common.add_argument("--format", choices=("text", "structured"))
    common.add_argument("--jobs", type=int)

    p = argparse.ArgumentParser(prog="kgsing", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="analyze a constraint-system document")
    a.add_argument("file", nargs="?", default="-")
    for c in COMMANDS:
        a.add_argument(f"--{c}", action="store_true")
    au = sub.add_parser("audit", parents=[common], help="benchmark audits")
    au.add_argument("benchmark", choices=("c1-dtlz1", "c2-dtlz2"))
    au.add_argument("--M", type=int, default=3)
    au.add_argument("--k", type=int, default=1)
    au.add_argument("--l", type=int, default=1)
    au.add_argument("--y", type=Fraction, nargs="*", default=None,
                    help="interior point y' (M-2 values)")
    t = sub.add_parser("tables", parents=[common], help="table reproduction suite")
    t.add_argument("action", choices=("verify",))
    t.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = config.load({"max_degree": args.max_degree, "mode": args.mode, "tol": args.tol,
                           "budget": args.budget, "format": args.format, "jobs": args.jobs})
        if args.command == "analyze":
            cmds = tuple(c for c in COMMANDS if getattr(args, c)) or DEFAULT_COMMANDS
            if args.file == "-":
                text = stdin.read()
            else:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            tree, status = analyze(text, cfg, cmds)
            _emit(tree, cfg, out)
            return status
        if args.command == "audit":
            tol = cfg.tol
            deg = min(cfg.max_degree, 6)
            if args.benchmark == "c1-dtlz1":
                res = bench.audit_c1(args.M, args.k, args.y, range(2, deg + 1), tol, cfg.budget)
            else:
                res = bench.audit_c2(args.M, args.k, args.l, tol, cfg.budget, deg)
            _emit(_audit_tree(res), cfg, out)
            return EXIT_NONGENERIC if res.verdict == "non-generic" else EXIT_OK
        from .verify import verify_all

        checks = verify_all(args.seed, cfg.max_degree)
        for c in checks:
            out.write(f"{'PASS' if c.ok else 'FAIL'} {c.name}: {c.detail}\n")
        bad = sum(not c.ok for c in checks)
        out.write(f"{len(checks) - bad}/{len(checks)} checks passed\n")
        return EXIT_OK if not bad else EXIT_ERROR
    except (KGError, OSError, ValueError) as e:
        code = getattr(e, "code", "error")
        err.write(f"error [{code}]: {e}\n")
        return EXIT_ERROR


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
