"""Command-line entry point.

Every subcommand prints one JSON document on standard output.  Exit codes:
0 on success or a passing report, 2 when a check produced a failing report,
1 on usage or data errors (reported on standard error as
``{"error": code, "detail": ...}``).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from fractions import Fraction
from typing import Any, Sequence

from . import cohft, div, fanchow, graphs, moduli, pp
from .cones import ConeComplex, ConeError, Cone, star_subdivision


class UsageError(Exception):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def load_json(arg: str) -> Any:
    """A file path, ``-`` for standard input, or inline JSON."""
    if arg == "-":
        return json.load(sys.stdin)
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        raise UsageError(f"{arg!r} is neither a readable file nor JSON") from None


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# graphs


def cmd_graphs_enum(args) -> tuple[dict, int]:
    found = graphs.enumerate_stable_graphs(args.g, args.n, args.max_vertices, args.max_edges)
    mass = sum((Fraction(1, aut) for _, aut in found), Fraction(0))
    return {
        "g": args.g,
        "n": args.n,
        "count": len(found),
        "mass": str(mass),
        "graphs": [{"graph": x.to_json(), "aut_order": aut, "digest": x.digest} for x, aut in found],
    }, 0


def cmd_graphs_validate(args):
    raw = load_json(args.graph)
    try:
        g = graphs.validate_graph(raw)
    except graphs.InvalidGraph as exc:
        return {"valid": False, "issues": [{"code": i.code, "detail": i.detail} for i in exc.issues]}, 2
    c = g.canonical()
    return {"valid": True, "canonical": c.graph.to_json(), "digest": c.digest, "aut_order": c.aut_order}, 0


def cmd_graphs_glue(args):
    g1 = graphs.validate_graph(load_json(args.first))
    if args.second is None:
        glued, _ = graphs.glue_loop(g1, args.p, args.q)
    else:
        g2 = graphs.validate_graph(load_json(args.second))
        glued, _, _ = graphs.glue_graphs(g1, args.p, g2, args.q)
    return {"graph": glued.to_json(), "digest": glued.digest}, 0


def cmd_graphs_forget(args):
    g = graphs.validate_graph(load_json(args.graph))
    out, script = graphs.forget_leg(g, args.leg)
    return {
        "graph": out.to_json(),
        "digest": out.digest,
        "script": {t: dict(sorted(src.items())) for t, src in sorted(script.items())},
    }, 0


# ---------------------------------------------------------------------------
# moduli and piecewise polynomials


def cmd_moduli_build(args):
    return moduli.stack_to_json(moduli.build_moduli(args.g, args.n, not args.unpointed)), 0


def _class(arg: str) -> pp.PPClass:
    return pp.PPClass.from_json(load_json(arg))


def cmd_pp_length(args):
    return pp.length_class(moduli.build_moduli(args.g, args.n), args.leg).to_json(), 0


def cmd_pp_boundary(args):
    graph = graphs.validate_graph(load_json(args.graph))
    return pp.boundary_class(moduli.build_moduli(args.g, args.n), graph).to_json(), 0


def cmd_pp_mul(args):
    return (_class(args.left) * _class(args.right)).to_json(), 0


def cmd_pp_exp(args):
    return pp.exp_truncated(_class(args.cls), args.max_deg).to_json(), 0


def cmd_pp_pullback(args):
    m = moduli.parse_morphism(args.morphism)
    return pp.pullback(m, _class(args.cls)).to_json(), 0


def cmd_pp_dr(args):
    L = _class(args.L) if args.L else None
    P = _class(args.P) if args.P else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        c = pp.dr_polynomial(args.g, args.n, int_list(args.a), L, P)
    for w in caught:
        print(dumps({"warning": type(w.message).__name__, "detail": str(w.message)}), file=sys.stderr)
    return c.to_json(), 0


def cmd_pp_validate(args):
    report = _class(args.cls).validate()
    return report.to_json(), 0 if report.ok else 2


# ---------------------------------------------------------------------------
# tropical divisors


def cmd_div_slopes(args):
    g = graphs.validate_graph(load_json(args.graph))
    return div.enumerate_balanced_slopes(g, int_list(args.a), args.bound).to_json(), 0


def cmd_div_cone(args):
    g = graphs.validate_graph(load_json(args.graph))
    return div.div_cone(g, int_list(args.slopes), int_list(args.a), not args.unpointed).to_json(), 0


def cmd_div_square(args):
    report = div.check_div_gluing_square(args.g1, args.n1, args.g2, args.n2, int_list(args.a), args.bound)
    return report.to_json(), 0 if report.passed else 2


def cmd_div_monoid(args):
    m = div.glue_node_monoid(args.k, int_list(args.l1), int_list(args.l2))
    out = m.to_json()
    if args.box is not None:
        out["box_check"] = {
            "side": args.box,
            "agrees": m.closure_in_box(args.box) == m.members_in_box(args.box),
        }
    return out, 0


# ---------------------------------------------------------------------------
# axiom checks and fans


def cmd_cohft_check(args):
    base = os.path.dirname(os.path.abspath(args.spec)) if os.path.exists(args.spec) else os.getcwd()
    spec = cohft.spec_from_json(load_json(args.spec), lambda p: load_json(os.path.join(base, p)))
    envelope = cohft.Envelope.parse(args.envelope)
    axioms = [a for a in args.axioms.split(",") if a]
    reports = cohft.run_checks(spec, axioms, envelope)
    passed = all(r.passed for r in reports)
    return {"envelope": str(envelope), "passed": passed, "reports": [r.to_json() for r in reports]}, 0 if passed else 2


def _fan(arg: str) -> ConeComplex:
    data = load_json(arg)
    if isinstance(data, str) and data.startswith("rank"):
        return fanchow.orthant_fan(int(data[4:]))
    return ConeComplex.from_json(data)


def cmd_fan_chow(args):
    return fanchow.chow_ring(_fan(args.fan), args.max_deg).to_json(), 0


def cmd_fan_probe(args):
    if args.cone.startswith("rank") and args.cone[4:].isdigit():
        cone = Cone.orthant(int(args.cone[4:]))
    else:
        data = load_json(args.cone)
        cone = Cone([tuple(r) for r in data["rays"]], int(data["rank"]))
    script = load_json(args.script) if args.script else {"steps": []}
    steps = script["steps"] if isinstance(script, dict) else script
    chain = [ConeComplex.from_json(s) if isinstance(s, dict) else s for s in steps]
    return fanchow.logch_probe(cone, chain, args.max_deg).to_json(), 0


def cmd_fan_subdivide(args):
    fan = _fan(args.fan)
    return star_subdivision(fan, int_list(args.ray)).refined.to_json(), 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logtrop", description="Tropical moduli, piecewise polynomials and gluing checks.")
    parser.add_argument("--output", "-o", help="write the JSON result to this file instead of standard output")
    top = parser.add_subparsers(dest="group", required=True)
    # lets --output also follow the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    def group(name, help_text):
        p = top.add_parser(name, help=help_text)
        sub = p.add_subparsers(dest="command", required=True)
        add = sub.add_parser

        def add_with_common(*a, **kw):
            kw.setdefault("parents", [common])
            return add(*a, **kw)

        sub.add_parser = add_with_common
        return sub

    def sig(p):
        p.add_argument("--g", type=int, required=True)
        p.add_argument("--n", type=int, required=True)

    gr = group("graphs", "stable graphs")
    p = gr.add_parser("enum", help="enumerate isomorphism classes")
    sig(p)
    p.add_argument("--max-vertices", type=int, default=graphs.DEFAULT_MAX_VERTICES)
    p.add_argument("--max-edges", type=int, default=graphs.DEFAULT_MAX_EDGES)
    p.set_defaults(fn=cmd_graphs_enum)
    p = gr.add_parser("validate", help="validate and canonicalise a graph")
    p.add_argument("--graph", required=True)
    p.set_defaults(fn=cmd_graphs_validate)
    p = gr.add_parser("glue", help="glue two legs (one graph: self-gluing)")
    p.add_argument("--first", required=True)
    p.add_argument("--second")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(fn=cmd_graphs_glue)
    p = gr.add_parser("forget", help="forget a leg and stabilise")
    p.add_argument("--graph", required=True)
    p.add_argument("--leg", type=int, required=True)
    p.set_defaults(fn=cmd_graphs_forget)

    mo = group("moduli", "tropical moduli cone stacks")
    p = mo.add_parser("build")
    sig(p)
    p.add_argument("--unpointed", action="store_true")
    p.set_defaults(fn=cmd_moduli_build)

    pg = group("pp", "piecewise-polynomial classes")
    p = pg.add_parser("make-length")
    sig(p)
    p.add_argument("--leg", type=int, required=True)
    p.set_defaults(fn=cmd_pp_length)
    p = pg.add_parser("make-boundary")
    sig(p)
    p.add_argument("--graph", required=True)
    p.set_defaults(fn=cmd_pp_boundary)
    p = pg.add_parser("mul")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=cmd_pp_mul)
    p = pg.add_parser("exp")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--max-deg", type=int, required=True)
    p.set_defaults(fn=cmd_pp_exp)
    p = pg.add_parser("pullback")
    p.add_argument("--morphism", required=True, help="glue:g1,n1,g2,n2 | loop:g,n | forget:g,n | perm:g,n:p1,...")
    p.add_argument("--class", dest="cls", required=True)
    p.set_defaults(fn=cmd_pp_pullback)
    p = pg.add_parser("dr")
    sig(p)
    p.add_argument("--a", required=True)
    p.add_argument("--L")
    p.add_argument("--P")
    p.set_defaults(fn=cmd_pp_dr)
    p = pg.add_parser("validate")
    p.add_argument("--class", dest="cls", required=True)
    p.set_defaults(fn=cmd_pp_validate)

    dv = group("divtrop", "tropical divisors")
    p = dv.add_parser("slopes")
    p.add_argument("--graph", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(fn=cmd_div_slopes)
    p = dv.add_parser("cone")
    p.add_argument("--graph", required=True)
    p.add_argument("--slopes", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--unpointed", action="store_true")
    p.set_defaults(fn=cmd_div_cone)
    p = dv.add_parser("square")
    for name in ("g1", "n1", "g2", "n2", "bound"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--a", required=True)
    p.set_defaults(fn=cmd_div_square)
    p = dv.add_parser("monoid")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l1", required=True)
    p.add_argument("--l2", required=True)
    p.add_argument("--box", type=int)
    p.set_defaults(fn=cmd_div_monoid)

    co = group("cohft", "gluing axiom checks")
    p = co.add_parser("check")
    p.add_argument("--spec", required=True)
    p.add_argument("--axioms", default="sn,sep,loop,unit")
    p.add_argument("--envelope", default="g<=1,n<=4")
    p.set_defaults(fn=cmd_cohft_check)

    fa = group("fan", "fans and their Chow rings")
    p = fa.add_parser("chow")
    p.add_argument("--fan", required=True)
    p.add_argument("--max-deg", type=int)
    p.set_defaults(fn=cmd_fan_chow)
    p = fa.add_parser("probe")
    p.add_argument("--cone", required=True, help="rankN for the orthant, or a JSON cone")
    p.add_argument("--script", help="JSON list of rays or fans, or {\"steps\": [...]}")
    p.add_argument("--max-deg", type=int, default=2)
    p.set_defaults(fn=cmd_fan_probe)
    p = fa.add_parser("subdivide")
    p.add_argument("--fan", required=True)
    p.add_argument("--ray", required=True)
    p.set_defaults(fn=cmd_fan_subdivide)
    return parser


DATA_ERRORS = (
    UsageError,
    graphs.GraphError,
    ConeError,
    moduli.StackError,
    pp.PPError,
    div.DivError,
    cohft.CohFTError,
    fanchow.FanError,
    KeyError,
    ValueError,
    TypeError,
)


def _error(code: str, detail: Any) -> int:
    print(dumps({"error": code, "detail": detail}), file=sys.stderr)
    return 1


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        result, code = args.fn(args)
    except graphs.InvalidGraph as exc:
        return _error("InvalidGraph", [{"code": i.code, "detail": i.detail} for i in exc.issues])
    except DATA_ERRORS as exc:
        return _error(type(exc).__name__, str(exc))
    except OSError as exc:
        return _error("IOError", str(exc))
    text = dumps(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
