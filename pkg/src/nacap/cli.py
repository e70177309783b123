"""Command-line interface.

Every subcommand loads a graph spec, runs one computation and emits a
deterministic report: JSON by default (byte-identical across runs for the
same spec and flags), or aligned text with --human.  Each serialized field
element carries its guarantee exponent, and the report ends with a
precision audit (the least guarantee encountered).

Exit codes: 0 success, 2 spec or usage error, 3 precision exhausted,
4 mathematical precondition failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import scalars
from .capacity import (
    capacity_sequence,
    classify_generic,
    classify_spherical,
    nash_williams,
    real_sweep,
)
from .dirichlet import green_matrix, solve_dp, solve_renormalized
from .errors import PrecisionError, PreconditionError, SpecFileError
from .exact import Q
from .field import INF, PrecisionConfig, guarantee_str, precision
from .potential import (
    construct_superharmonic,
    hardy_construct,
    hardy_verify,
    harnack_constant,
    is_superharmonic,
)
from .specfile import build_graph, load_spec, parse_precision
from .transition import (
    TransitionContext,
    neumann_partial,
    pi_element,
    pn_element,
    pn_restricted,
)

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_PRECISION = 3
EXIT_PRECONDITION = 4


def _scalar_json(x):
    return {
        "value": str(x),
        "guarantee": guarantee_str(scalars.guarantee_of(x)),
    }


def _values_json(values):
    return {str(v): _scalar_json(values[v]) for v in sorted(values)}


def _min_guarantee(node):
    """Least guarantee exponent mentioned anywhere in a report tree."""
    best = INF
    if isinstance(node, dict):
        for key, value in node.items():
            if key == "guarantee" and isinstance(value, str):
                if value != "inf":
                    g = Fraction(value)
                    best = g if best == INF or g < best else best
            else:
                g = _min_guarantee(value)
                if g != INF and (best == INF or g < best):
                    best = g
    elif isinstance(node, (list, tuple)):
        for value in node:
            g = _min_guarantee(value)
            if g != INF and (best == INF or g < best):
                best = g
    return best


def _render_human(node, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(node, dict):
        if set(node) == {"value", "guarantee"}:
            return [f"{node['value']}   [guarantee {node['guarantee']}]"]
        for key in node:
            sub = _render_human(node[key], indent + 1)
            if len(sub) == 1 and not sub[0].startswith("  "):
                lines.append(f"{pad}{key}: {sub[0]}")
            else:
                lines.append(f"{pad}{key}:")
                lines.extend(f"{pad}{line}" if line.startswith("  ") else f"{pad}  {line}" for line in sub)
    elif isinstance(node, (list, tuple)):
        for item in node:
            sub = _render_human(item, indent)
            if len(sub) == 1:
                lines.append(f"{pad}- {sub[0].strip()}")
            else:
                lines.append(f"{pad}-")
                lines.extend(sub)
    else:
        return [str(node)]
    return lines


def _int_list(text):
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _fraction_list(text):
    return [Fraction(part.strip()) for part in text.split(",") if part.strip() != ""]


# ---------------------------------------------------------------------------
# Handlers: each returns the outputs block of the report
# ---------------------------------------------------------------------------


def _cmd_solve_dp(graph, args):
    K = graph.ball(args.root, args.horizon)
    solver = solve_renormalized if args.renormalized else solve_dp
    sol = solver(graph, K, args.root)
    return {
        "normalization": sol.normalization,
        "vertices": list(sol.vertices),
        "values": _values_json(sol.values),
        "capacity": _scalar_json(sol.capacity),
        "energy": _scalar_json(sol.energy),
    }


def _cmd_capacity(graph, args):
    sequence = capacity_sequence(graph, args.root, args.horizon)
    verdict = classify_generic(graph, args.root, args.horizon)
    return {
        "root": sequence.root,
        "values": [_scalar_json(v) for v in sequence.values],
        "difference_valuations": [guarantee_str(v) for v in sequence.difference_valuations],
        "verdict": verdict.to_json(),
    }


def _cmd_classify(graph, args):
    return {"verdict": classify_spherical(graph, horizon=args.horizon).to_json()}


def _cmd_nash_williams(graph, args):
    certificate = nash_williams(graph, args.root, args.horizon)
    return {
        "certificate": certificate.to_json() if certificate is not None else None,
        "found": certificate is not None,
    }


def _cmd_green(graph, args):
    K = graph.ball(args.y, args.horizon)
    column = green_matrix(graph, K, args.y)
    if args.x not in column:
        raise PreconditionError(f"vertex {args.x} outside the ball of radius {args.horizon}")
    return {
        "x": args.x,
        "y": args.y,
        "value": _scalar_json(column[args.x]),
        "column": _values_json(column),
    }


def _cmd_transition(graph, args):
    ctx = TransitionContext(graph)
    restrict = None
    if args.restrict is not None:
        restrict = tuple(ctx.graph.ball(args.x, args.restrict + 1))
    out = {"x": args.x, "y": args.y, "n": args.n}
    if restrict is not None:
        out["restriction"] = list(restrict)
    if args.max_product:
        result = pi_element(ctx, args.x, args.y, args.n, restrict=restrict)
        out["max_path_product"] = _scalar_json(result.value)
        out["witness_path"] = list(result.path) if result.path is not None else None
    elif restrict is not None:
        out["pn"] = _scalar_json(pn_restricted(ctx, restrict, args.x, args.y, args.n))
    else:
        out["pn"] = _scalar_json(pn_element(ctx, args.x, args.y, args.n))
    if args.series is not None:
        report = neumann_partial(ctx, args.x, args.y, args.series, restrict=restrict)
        out["series"] = report.to_json()
    return out


def _cmd_harnack(graph, args):
    W = _int_list(args.set)
    return {"set": W, "constant": _scalar_json(harnack_constant(graph, W))}


def _cmd_superharmonic(graph, args):
    if args.construct:
        c = graph.field.from_literal(args.c)
        tau = graph.field.from_literal(args.tau)
        construction = construct_superharmonic(graph, args.root, c, tau, radius=args.horizon)
        return {
            "formula": construction.formula,
            "values": _values_json(construction.values),
            "check": construction.report.to_json(),
        }
    if not args.u:
        raise SpecFileError("superharmonic needs --construct or --u")
    literals = [part.strip() for part in args.u.split(",")]
    values = {i: graph.field.from_literal(text) for i, text in enumerate(literals)}
    window = [
        v
        for v in values
        if all(y in values for y in graph.neighbors(v))
    ]
    report = is_superharmonic(graph, values, window)
    return {"checked_vertices": window, "check": report.to_json()}


def _cmd_hardy(graph, args):
    verdict = classify_spherical(graph, horizon=args.horizon)
    weight = hardy_construct(graph, verdict, horizon=args.horizon)
    samples = [
        solve_dp(graph, graph.ball(args.root, n), args.root).values
        for n in range(1, args.samples + 1)
    ]
    verification = hardy_verify(graph, weight.weights, samples)
    return {
        "verdict": verdict.to_json(),
        "weight": weight.to_json(),
        "verification": {
            "ok": verification.ok,
            "samples": verification.checked,
            "failures": list(verification.failures),
        },
    }


def _cmd_real_sweep(graph, args):
    table = real_sweep(graph, args.root, args.power, _fraction_list(args.r), args.horizon)
    return {"table": table.to_json()}


HANDLERS = {
    "solve-dp": _cmd_solve_dp,
    "capacity": _cmd_capacity,
    "classify": _cmd_classify,
    "nash-williams": _cmd_nash_williams,
    "green": _cmd_green,
    "transition": _cmd_transition,
    "harnack": _cmd_harnack,
    "superharmonic": _cmd_superharmonic,
    "hardy": _cmd_hardy,
    "real-sweep": _cmd_real_sweep,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nacap",
        description=(
            "Exact capacity, Dirichlet and transition-operator computations on "
            "weighted graphs over non-Archimedean ordered fields."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="spec file path or bundled name ex1..ex9")
    common.add_argument("--window", type=Fraction, default=None, help="precision window override")
    common.add_argument("--max-terms", type=int, default=None, help="max stored terms override")
    common.add_argument(
        "--min-guarantee",
        type=Fraction,
        default=None,
        help="fail (exit 3) if the report's precision audit falls below this",
    )
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--human", action="store_true", help="aligned text output")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-dp", parents=[common], help="Dirichlet problem on a ball")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--horizon", type=int, required=True, help="ball radius")
    p.add_argument("--renormalized", action="store_true", help="charge normalization")

    p = sub.add_parser("capacity", parents=[common], help="capacity sequence and verdict")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--horizon", type=int, required=True)

    p = sub.add_parser("classify", parents=[common], help="capacity type from the weight profile")
    p.add_argument("--horizon", type=int, default=16)

    p = sub.add_parser("nash-williams", parents=[common], help="null-capacity subsequence search")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--horizon", type=int, required=True)

    p = sub.add_parser("green", parents=[common], help="inverse Dirichlet Laplacian column")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True, help="ball radius around y")

    p = sub.add_parser("transition", parents=[common], help="transition operator powers")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--restrict", type=int, default=None, help="confine paths to the ball of this radius around x (inclusive index bound on paths)")
    p.add_argument("--series", type=int, default=None, help="also sum P^n up to this N")
    p.add_argument("--max-product", action="store_true", help="maximal path product instead of the sum")

    p = sub.add_parser("harnack", parents=[common], help="local Harnack constant")
    p.add_argument("--set", required=True, help="comma-separated vertices, e.g. 0,1,2")

    p = sub.add_parser("superharmonic", parents=[common], help="verify or construct")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--horizon", type=int, default=6)
    p.add_argument("--construct", action="store_true")
    p.add_argument("--c", default="1", help="ratio bound (field literal)")
    p.add_argument("--tau", default="1*e^(1)", help="infinitesimal (field literal)")
    p.add_argument("--u", default=None, help="comma-separated literals for vertices 0,1,...")

    p = sub.add_parser("hardy", parents=[common], help="construct and verify a Hardy weight")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--samples", type=int, default=8)

    p = sub.add_parser("real-sweep", parents=[common], help="real capacities of a rational-function graph")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--power", type=int, default=0, help="report r^(-power) * capacity")
    p.add_argument("--r", required=True, help="comma-separated rational parameters")
    p.add_argument("--horizon", type=int, required=True)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        data = load_spec(args.spec)
        graph, config = build_graph(data)
        overrides = {}
        if args.window is not None:
            overrides["window"] = args.window
        if args.max_terms is not None:
            overrides["max_terms"] = args.max_terms
        if overrides:
            config = PrecisionConfig(
                window=overrides.get("window", config.window),
                max_terms=overrides.get("max_terms", config.max_terms),
                geometric_series_depth=config.geometric_series_depth,
            )
        with precision(config):
            outputs = HANDLERS[args.command](graph, args)
        report = {
            "command": args.command,
            "spec": {"source": str(args.spec), **data},
            "precision": {
                "window": str(config.window),
                "max_terms": config.max_terms,
                "geometric_series_depth": config.geometric_series_depth,
            },
            "outputs": outputs,
        }
        audit = _min_guarantee(outputs)
        report["precision_audit"] = {"min_guarantee": guarantee_str(audit)}
        if args.min_guarantee is not None and audit != INF and audit < args.min_guarantee:
            print(json.dumps(report, indent=2, sort_keys=True))
            print(
                f"precision audit {audit} below required {args.min_guarantee}",
                file=sys.stderr,
            )
            return EXIT_PRECISION
        if args.human:
            print("\n".join(_render_human(report)))
        else:
            print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK
    except (SpecFileError, ValueError) as err:
        print(f"spec error: {err}", file=sys.stderr)
        return EXIT_SPEC
    except PrecisionError as err:
        print(f"precision exhausted: {err}", file=sys.stderr)
        return EXIT_PRECISION
    except PreconditionError as err:
        print(f"precondition failed: {err}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
