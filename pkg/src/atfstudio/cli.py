"""Command-line shell.

Exit codes: 0 success, 1 inequivalent (equiv), 2 validation or input
error, 3 corner merge.  Every subcommand accepts --json for
machine-parsable output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .affine import IVec2, qvec
from .diagram import (
    Diagram,
    corner_type,
    diagram_from_json,
    diagram_to_json,
    preset,
    validate,
)
from .energy import (
    PLGerm,
    best_probe_bound,
    energy_at,
    germ_equivalent,
    germ_normal_form,
    germ_of_fibre,
    probe_bound,
)
from .errors import AtfError, CornerMerge, MoveError
from .moves import change_branch_cut, mutate_with_clearing, nodal_slide, nodal_trade
from .rat import rat, rat_str
from .render import RenderSpec, render_svg
from .service import default_viewport, serve_forever
from .walker import markov_tree, prepare, two_corner_report, walk

EXIT_OK = 0
EXIT_INEQUIVALENT = 1
EXIT_INVALID = 2
EXIT_CORNER_MERGE = 3


def _emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _load_diagram(path: str) -> Diagram:
    with open(path) as fh:
        return diagram_from_json(fh.read())


def _save_diagram(path: str, dg: Diagram):
    with open(path, "w") as fh:
        fh.write(diagram_to_json(dg) + "\n")


def _germ_text(germ: PLGerm) -> str:
    terms = []
    for g in sorted(germ.gradients, key=lambda g: (-g.x, g.y)):
        parts = []
        for coef, name in ((g.x, "b1"), (g.y, "b2")):
            if coef == 0:
                continue
            if coef == 1:
                parts.append(name)
            elif coef == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{rat_str(coef)}*{name}")
        if not parts:
            terms.append("0")
        else:
            text = parts[0]
            for extra in parts[1:]:
                text += f" - {extra[1:]}" if extra.startswith("-") else f" + {extra}"
            terms.append(text)
    base = rat_str(germ.base)
    if len(terms) == 1:
        return f"{base} + {terms[0]}"
    return f"{base} + min{{{', '.join(terms)}}}"


# -- subcommands -----------------------------------------------------------


def cmd_new(args) -> int:
    params = {}
    if args.preset == "cp2":
        params["lam"] = rat(args.lam) if args.lam else Fraction(3)
    elif args.preset == "quadrant":
        params["cap"] = rat(args.cap) if args.cap else Fraction(4)
    elif args.preset == "rectangle":
        params["width"] = rat(args.width) if args.width else Fraction(4)
        params["height"] = rat(args.height) if args.height else Fraction(1)
    elif args.preset == "bdpq":
        params["d"] = args.d if args.d is not None else 1
        params["p"] = args.p if args.p is not None else 1
        params["q"] = args.q if args.q is not None else 0
        if args.nodes:
            params["nodes"] = tuple(rat(t) for t in args.nodes.split(","))
        if args.cut_side:
            params["cut_side"] = args.cut_side
    dg = preset(args.preset, **params)
    if args.prepare:
        dg = prepare(dg)
    _save_diagram(args.output, dg)
    _emit(args, {"written": args.output, "digest": dg.digest()}, f"wrote {args.output}")
    return EXIT_OK


def cmd_validate(args) -> int:
    dg = _load_diagram(args.input)
    violations = validate(dg)
    payload = {"valid": not violations, "violations": [v.to_dict() for v in violations]}
    text = "valid" if not violations else "\n".join(f"{v.kind}: {v.detail}" for v in violations)
    _emit(args, payload, text)
    return EXIT_OK if not violations else EXIT_INVALID


def cmd_move(args) -> int:
    dg = _load_diagram(args.input)
    record = None
    if args.move == "trade":
        if args.vertex is None:
            raise AtfError("trade needs --vertex")
        out = nodal_trade(dg, args.vertex, rat(args.epsilon) if args.epsilon else None)
    elif args.move == "slide":
        if args.corner is None or args.node is None or args.to is None:
            raise AtfError("slide needs --corner, --node and --to")
        out, record = nodal_slide(dg, args.corner, args.node, rat(args.to))
    elif args.move == "cut-change":
        if args.corner is None:
            raise AtfError("cut-change needs --corner")
        out = change_branch_cut(dg, args.corner)
    elif args.move == "mutate":
        if args.corner is None:
            raise AtfError("mutate needs --corner")
        out, record = mutate_with_clearing(
            dg, args.corner, rat(args.epsilon) if args.epsilon else None
        )
    else:
        raise AtfError(f"unknown move {args.move!r}")
    _save_diagram(args.output, out)
    payload = {
        "written": args.output,
        "digest": out.digest(),
        "record": record.to_dict() if record else None,
    }
    _emit(args, payload, f"applied {args.move}, wrote {args.output}")
    return EXIT_OK


def cmd_germ(args) -> int:
    germ = germ_of_fibre(args.p, args.q, args.k, rat(args.a))
    payload = {"germ": germ.to_dict(), "text": _germ_text(germ)}
    if args.normal_form:
        payload["class"] = germ_normal_form(germ).to_dict()
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(germ.to_dict(), fh, sort_keys=True)
            fh.write("\n")
    text = _germ_text(germ)
    if args.normal_form:
        text += f"   class: {json.dumps(payload['class'], sort_keys=True)}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_equiv(args) -> int:
    with open(args.left) as fh:
        g1 = PLGerm.from_dict(json.load(fh))
    with open(args.right) as fh:
        g2 = PLGerm.from_dict(json.load(fh))
    eq, witness = germ_equivalent(g1, g2, entry_bound=args.brute_bound, with_witness=True)
    payload = {
        "equivalent": eq,
        "witness": list(sum(witness.rows(), ())) if witness else None,
    }
    text = "equivalent" if eq else "inequivalent"
    if witness:
        text += f"  witness {witness}"
    _emit(args, payload, text)
    return EXIT_OK if eq else EXIT_INEQUIVALENT


def cmd_energy(args) -> int:
    dg = _load_diagram(args.model)
    x, y = (rat(part) for part in args.at.split(","))
    value = energy_at(dg, qvec(x, y), args.flipped)
    texts = {
        "exact": lambda v: f"e = {rat_str(v.value)}",
        "unknown": lambda v: "unknown (left open on the node ray)",
        "upper_bound": lambda v: f"e <= {rat_str(v.value)}",
    }
    _emit(args, value.to_dict(), texts[value.status](value))
    return EXIT_OK


def cmd_probe(args) -> int:
    dg = _load_diagram(args.input)
    x, y = (rat(part) for part in args.at.split(","))
    point = qvec(x, y)
    if args.dir:
        wx, wy = (int(part) for part in args.dir.split(","))
        bound = probe_bound(dg, point, IVec2(wx, wy))
    else:
        bound = best_probe_bound(dg, point, args.search)
    payload = {"bound": rat_str(bound) if bound is not None else None}
    text = f"e <= {rat_str(bound)}" if bound is not None else "no probe displaces this point"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_walk(args) -> int:
    dg = _load_diagram(args.input)
    if any(not dg.corners_at(v) for v in dg.vertices):
        dg = prepare(dg)
    trace = walk(dg, args.edge, args.steps)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(trace.to_csv())
    payload = trace.to_dict()
    if args.report:
        try:
            payload["two_corner_report"] = two_corner_report(trace, window=args.window).to_dict()
        except AtfError as exc:
            payload["two_corner_report"] = {"error": str(exc)}
    lines = [
        f"n={s.n} label={s.label} type=({s.mutated_type.d},{s.mutated_type.p},{s.mutated_type.q_class})"
        f" ell={rat_str(s.ell)} a_n={rat_str(s.a_n)}"
        for s in trace.steps
    ]
    if trace.aborted:
        lines.append(f"aborted: {trace.abort_reason}")
    _emit(args, payload, "\n".join(lines) if lines else "no steps")
    return EXIT_OK


def cmd_markov(args) -> int:
    tree = markov_tree(rat(args.lam), args.depth)
    by_depth = tree.triples_by_depth()
    payload = {
        "tree": tree.to_dict(),
        "by_depth": {str(k): sorted(set(tuple(t) for t in v)) for k, v in by_depth.items()},
    }
    text = "\n".join(
        f"depth {k}: {sorted(set(tuple(t) for t in v))}" for k, v in sorted(by_depth.items())
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_render(args) -> int:
    dg = _load_diagram(args.input)
    if args.viewport:
        vals = [rat(v) for v in args.viewport.split(",")]
        viewport = tuple(vals)
    else:
        viewport = default_viewport(dg)
    spec = RenderSpec(
        viewport=viewport,
        levels=tuple(rat(v) for v in args.levels.split(",")) if args.levels else (),
        crease=args.crease,
    )
    svg = render_svg(dg, spec)
    with open(args.output, "w") as fh:
        fh.write(svg)
    _emit(args, {"written": args.output}, f"wrote {args.output}")
    return EXIT_OK


def cmd_serve(args) -> int:
    state = os.environ.get("ATF_STATE_DIR") or args.state
    serve_forever(state, args.port)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atf", description="exact-arithmetic almost toric diagram toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("new", help="write a preset diagram")
    p.add_argument("--preset", required=True, choices=["cp2", "quadrant", "rectangle", "bdpq"])
    p.add_argument("--lam", help="cp2 side length")
    p.add_argument("--cap", help="quadrant drawing cap")
    p.add_argument("--width")
    p.add_argument("--height")
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--nodes", help="comma-separated node parameters")
    p.add_argument("--cut-side", dest="cut_side", choices=["outward", "inward"])
    p.add_argument("--prepare", action="store_true", help="trade all vertices first")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_new)

    p = sub.add_parser("validate", help="check a diagram file")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("move", help="apply one move")
    p.add_argument("move", choices=["trade", "slide", "cut-change", "mutate"])
    p.add_argument("--vertex", type=int)
    p.add_argument("--corner", type=int)
    p.add_argument("--node", type=int)
    p.add_argument("--to")
    p.add_argument("--epsilon")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("germ", help="displacement-energy germ of a model fibre")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--normal-form", action="store_true")
    p.add_argument("-o", "--output", help="write the germ JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_germ)

    p = sub.add_parser("equiv", help="decide germ equivalence")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--brute-bound", type=int, default=8)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("energy", help="exact energy in a cut-changed model chart")
    p.add_argument("--model", required=True)
    p.add_argument("--at", required=True, help="x,y")
    p.add_argument("--flipped", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("probe", help="probe upper bound")
    p.add_argument("--at", required=True, help="x,y")
    p.add_argument("--dir", help="a,b probe direction")
    p.add_argument("--search", type=int, default=5)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("walk", help="edge-stretching mutation walk")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--edge", type=int, required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--csv", help="write the trace as CSV")
    p.add_argument("--report", action="store_true", help="append the two-label report")
    p.add_argument("--window", type=int, default=8)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("markov", help="mutation tree of the triangle")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="3")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("render", help="render a diagram to SVG")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--levels", help="comma-separated energy level values")
    p.add_argument("--viewport", help="xmin,ymin,xmax,ymax")
    p.add_argument("--crease", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="run the local JSON service")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--state", help="session persistence directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CornerMerge as exc:
        print(f"corner merge: {exc}", file=sys.stderr)
        return EXIT_CORNER_MERGE
    except AtfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
