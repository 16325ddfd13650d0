"""Command line interface.

Subcommands: catalog, validate, coeffs, eval, compare.  A space argument
is either a builtin name (S2..S6, S2xS2, S2xS3, flat3 or flat(3)) or a
path to a space file.  Exit codes: 0 success, 1 validation or check
failure, 2 usage error.  Exact coefficients always print as rational
strings; floats appear only in numeric output, with 17 significant
digits.  Output is deterministic for a fixed seed; timings are only
emitted under --timing.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog as cat
from .averaging import numeric_average
from .curvature import curvature_scalars, derive_holonomy, validate_symmetric_space
from .errors import (
    HeatgenError,
    NonPositiveT,
    OrderTooLarge,
    ParseError,
    UnknownSpace,
    ValidationError,
)
from .invariants import compare, heat_coefficients

_USAGE_ERRORS = (UnknownSpace, NonPositiveT)
_DATA_ERRORS = (ParseError, ValidationError, OrderTooLarge)


def _resolve_space(token: str, validate: bool = True):
    try:
        return cat.builtin(token)
    except UnknownSpace:
        if Path(token).exists():
            return cat.load(token, validate=validate)
        raise


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _checks_json(checks) -> list[dict]:
    return [
        {"name": c.name, "pass": c.passed, "detail": c.detail} for c in checks
    ]


def _emit_report(report, args, extra_checks=()) -> None:
    checks = tuple(extra_checks) + report.checks
    if report.validation is not None:
        checks = report.validation.checks + checks
    timing = report.timing_ms if args.timing else None
    if args.json:
        doc = {
            "space": report.space,
            "order": report.order,
            "a": [str(c) for c in report.coeffs],
            "checks": _checks_json(checks),
            "timing_ms": timing,
        }
        print(json.dumps(doc, indent=2))
        return
    print(f"space {report.space}, order {report.order}")
    for k, c in enumerate(report.coeffs):
        print(f"a_{k} = {c}")
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"[{mark}] {c.name}: {c.detail}")
    if timing is not None:
        print(f"timing_ms = {timing:.3f}")


def _cmd_catalog(args) -> int:
    for name in cat.catalog_names():
        if name == "flat(n)":
            print("flat(n)   flat space of any dimension n >= 1, e.g. flat3")
            continue
        spec = cat.builtin(name)
        print(f"{name:7s}  n={spec.n} p={spec.p}")
    return 0


def _cmd_validate(args) -> int:
    # Load without the validation gate: reporting which checks fail is
    # this command's whole job.
    spec = _resolve_space(args.space, validate=False)
    hol = derive_holonomy(spec)
    report = validate_symmetric_space(spec, hol)
    payload_checks = list(report.checks)
    detail_extra = None
    if report.all_passed:
        curv = curvature_scalars(spec, hol)
        detail_extra = (
            f"R = {curv.R}, R_H = {curv.R_H}, R_G = {curv.R_G}"
        )
    if args.json:
        doc = {
            "space": spec.name,
            "order": None,
            "a": [],
            "checks": _checks_json(payload_checks),
            "timing_ms": None,
        }
        if detail_extra:
            doc["scalars"] = detail_extra
        print(json.dumps(doc, indent=2))
    else:
        print(f"space {spec.name}: n={spec.n}, p={spec.p}")
        for c in payload_checks:
            mark = "PASS" if c.passed else "FAIL"
            print(f"[{mark}] {c.name}: {c.detail}")
        if detail_extra:
            print(detail_extra)
    return 0 if report.all_passed else 1


def _cmd_coeffs(args) -> int:
    spec = _resolve_space(args.space)
    report = heat_coefficients(spec, args.order, budget=args.budget)
    _emit_report(report, args)
    return 0


def _cmd_eval(args) -> int:
    spec = _resolve_space(args.space)
    if args.t <= 0:
        raise NonPositiveT(f"t must be positive, got {args.t}")
    hol = derive_holonomy(spec)
    if args.method == "series":
        report = heat_coefficients(spec, args.order, budget=args.budget)
        value = report.eval_float(args.t)
        doc = {
            "space": spec.name,
            "t": args.t,
            "method": "series",
            "order": args.order,
            "value": _fmt_float(value),
            "std_error": None,
            "singularity_hits": None,
            "timing_ms": report.timing_ms if args.timing else None,
        }
    else:
        result = numeric_average(
            spec,
            hol,
            args.t,
            args.method,
            samples=args.samples,
            nodes=args.nodes,
            seed=args.seed,
        )
        doc = {
            "space": spec.name,
            "t": args.t,
            "method": result.method,
            "order": None,
            "value": _fmt_float(result.value),
            "std_error": _fmt_float(result.std_error),
            "singularity_hits": result.singularity_hits,
            "timing_ms": None,
        }
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        for key, val in doc.items():
            if val is not None:
                print(f"{key} = {val}")
    return 0


def _cmd_compare(args) -> int:
    spec = _resolve_space(args.space)
    try:
        t_grid = [float(x) for x in args.t.split(",") if x]
    except ValueError:
        raise UnknownSpace(f"bad t grid {args.t!r}")  # mapped to exit 2
    if not t_grid or any(t <= 0 for t in t_grid):
        raise NonPositiveT("every t must be positive")
    report = compare(
        spec,
        args.order,
        t_grid,
        method=args.method,
        samples=args.samples,
        nodes=args.nodes,
        seed=args.seed,
        budget=args.budget,
    )
    _emit_report(report, args)
    return 0 if report.all_passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatgen",
        description=(
            "Exact short-time heat kernel coefficients for compact "
            "symmetric spaces from algebraic curvature data."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pcat = sub.add_parser("catalog", help="list builtin spaces")
    pcat.set_defaults(func=_cmd_catalog)

    def add_common(p, with_order=True):
        p.add_argument("space", help="builtin name or space file path")
        if with_order:
            p.add_argument("--order", type=int, default=4,
                           help="t truncation order (default 4)")
        p.add_argument("--budget", type=int, default=None,
                       help="trace enumeration word budget override")
        p.add_argument("--json", action="store_true",
                       help="machine readable output")
        p.add_argument("--timing", action="store_true",
                       help="include wall time in the output")

    pv = sub.add_parser("validate", help="run the structural identity checks")
    pv.add_argument("space")
    pv.add_argument("--json", action="store_true")
    pv.set_defaults(func=_cmd_validate)

    pc = sub.add_parser("coeffs", help="exact expansion coefficients")
    add_common(pc)
    pc.set_defaults(func=_cmd_coeffs)

    pe = sub.add_parser("eval", help="evaluate the average at a time t")
    add_common(pe)
    pe.add_argument("--t", type=float, required=True)
    pe.add_argument("--method", choices=("series", "mc", "quadrature"),
                    default="series")
    pe.add_argument("--samples", type=int, default=100_000)
    pe.add_argument("--nodes", type=int, default=40)
    pe.add_argument("--seed", type=int, default=0)
    pe.set_defaults(func=_cmd_eval)

    pm = sub.add_parser("compare", help="pipeline vs every applicable oracle")
    add_common(pm)
    pm.add_argument("--t", default="0.05",
                    help="comma separated positive times (default 0.05)")
    pm.add_argument("--method", choices=("auto", "mc", "quadrature"),
                    default="auto")
    pm.add_argument("--samples", type=int, default=200_000)
    pm.add_argument("--nodes", type=int, default=40)
    pm.add_argument("--seed", type=int, default=0)
    pm.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # Library-level misuse (quadrature with too many generators,
        # negative order, ...) is a usage error at the CLI surface.
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except HeatgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
