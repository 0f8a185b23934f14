"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 eigenvector selection failure, 4 degeneracy while iterating.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import axis_aligned, collineation, geom, limit, pentagram
from .documents import (
    InputError,
    PolygonDocument,
    dumps_report,
    format_matrix,
    format_point,
    format_scalar,
)
from .errors import (
    AmbiguousSelection,
    DegeneratePolygon,
    DegenerateTriple,
    GeometryError,
    NoCandidateInHull,
    NotConvex,
)
from .geom import Polygon

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_SELECTION = 3
EXIT_ITERATION = 4

DEFAULT_EXACT_STEPS = 20
CROSS_CHECK_TOL = 1e-6
ALL_CHECKS = ("trace", "conservation", "invariance", "hull", "smalln", "duality", "incidence")


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_input(path: str) -> PolygonDocument:
    try:
        if path == "-":
            text, name = sys.stdin.read(), None
        else:
            text, name = Path(path).read_text(), Path(path).stem
    except OSError as exc:
        raise CommandError(EXIT_INPUT, f"cannot read {path}: {exc.strerror}") from None
    try:
        return PolygonDocument.parse(text, name)
    except (InputError, ValueError) as exc:
        raise CommandError(EXIT_INPUT, f"invalid input: {exc}") from None


def _polygon(doc: PolygonDocument) -> Polygon:
    try:
        return doc.to_polygon()
    except (GeometryError, ValueError) as exc:
        raise CommandError(EXIT_INPUT, f"invalid polygon: {exc}") from None


def _report(command: str, flags: dict, doc: PolygonDocument, A: Polygon, results: dict, checks=None) -> dict:
    out = {
        "command": command,
        "flags": flags,
        "input": {"name": doc.name, "n": A.n, "mode": A.mode, "digest": doc.digest()},
        "results": results,
    }
    if checks is not None:
        out["checks"] = checks
    return out


def _charpoly_json(p: collineation.CubicPoly, as_float: bool = False) -> dict:
    conv = float if as_float else format_scalar
    return {"monic": [conv(c) for c in p.coefficients], "text": str(p)}


# -- commands -------------------------------------------------------------------


def cmd_la(args) -> tuple:
    doc = _read_input(args.input)
    A = _polygon(doc)
    try:
        L = collineation.build_LA(A)
    except DegenerateTriple as exc:
        raise CommandError(EXIT_INPUT, f"degenerate polygon: {exc}") from None
    p = collineation.charpoly(L)
    results = {
        "matrix": format_matrix(L.matrix, as_float=args.float),
        "trace": float(collineation.trace(L)) if args.float else format_scalar(collineation.trace(L)),
        "charpoly": _charpoly_json(p, as_float=args.float),
    }
    return _report("la", {"float": args.float}, doc, A, results), EXIT_OK


def _limit_results(res: limit.LimitResult) -> dict:
    out = {
        "limit": format_point(res.limit),
        "eigenvalue": res.eigenvalue,
        "eigenvalues": res.eigenvalues,
        "complex_pair": res.complex_pair,
        "residual": res.residual,
        "largest_root": res.largest_root,
        "charpoly": _charpoly_json(res.charpoly),
        "candidates": [
            {
                "eigenvalue": c.eigenvalue,
                "point": format_point(c.point) if c.point is not None else None,
                "in_hull": c.in_hull,
                "residual": c.residual,
                "note": c.note,
            }
            for c in res.candidates
        ],
    }
    if res.rational_form is not None:
        rf = res.rational_form
        out["rational_form"] = {
            "x_numerator": [format_scalar(c) for c in rf.x_num],
            "y_numerator": [format_scalar(c) for c in rf.y_num],
            "denominator": [format_scalar(c) for c in rf.den],
        }
    return out


def cmd_limit(args) -> tuple:
    doc = _read_input(args.input)
    A = _polygon(doc)
    flags = {"method": args.method, "tol": args.tol}
    if A.n < 5:
        raise CommandError(EXIT_INPUT, f"limit needs at least 5 vertices, got {A.n}")
    if not geom.is_convex(A):
        raise CommandError(EXIT_INPUT, "NotConvex: limit requires a convex polygon")
    results, checks, code = {}, None, EXIT_OK
    try:
        if args.method in ("eigen", "both"):
            res = limit.limit_point(A, cross_check=args.method == "both", tol=args.tol)
            results = _limit_results(res)
            if args.method == "both":
                dev = res.iteration_deviation
                results["iteration_limit"] = format_point(res.iteration_limit)
                results["cross_deviation"] = dev
                ok = dev < CROSS_CHECK_TOL
                checks = [{"name": "cross_check", "status": "pass" if ok else "fail",
                           "deviation": dev, "threshold": CROSS_CHECK_TOL}]
                code = EXIT_OK if ok else EXIT_VERIFY
        else:
            pt = pentagram.limit_by_iteration(A, args.tol)
            results = {"limit": format_point(pt)}
    except (NoCandidateInHull, AmbiguousSelection) as exc:
        raise CommandError(EXIT_SELECTION, f"{type(exc).__name__}: {exc}") from None
    except DegenerateTriple as exc:
        raise CommandError(EXIT_INPUT, f"degenerate polygon: {exc}") from None
    except GeometryError as exc:
        raise CommandError(EXIT_ITERATION, _iteration_message(exc)) from None
    return _report("limit", flags, doc, A, results, checks), code


def _iteration_message(exc: GeometryError) -> str:
    where = f" at step {exc.step}" if exc.step else ""
    return f"{type(exc).__name__}{where}: {exc}"


def _exact_steps(args) -> int:
    return DEFAULT_EXACT_STEPS if args.exact_steps is None else args.exact_steps


def cmd_iterate(args) -> tuple:
    doc = _read_input(args.input)
    A = _polygon(doc)
    try:
        B = pentagram.iterate(A, args.k, _exact_steps(args))
    except (GeometryError, ValueError) as exc:
        raise CommandError(EXIT_ITERATION, _iteration_message(exc)) from None
    results = {"k": args.k, "mode": B.mode, "vertices": [format_point(p) for p in B]}
    flags = {"k": args.k, "exact_steps": _exact_steps(args)}
    return _report("iterate", flags, doc, A, results), EXIT_OK


def cmd_collapse(args) -> tuple:
    doc = _read_input(args.input)
    A = _polygon(doc)
    shape = axis_aligned.detect(A)
    if shape is None:
        raise CommandError(EXIT_INPUT, "NotAxisAligned: input is not an axis-aligned 2m-gon")
    results = {
        "m": shape.m,
        "phase": shape.phase,
        "offset": shape.offset,
        "odd_x": [format_scalar(x) for x in shape.xs],
        "even_y": [format_scalar(y) for y in shape.ys],
        "collapse_point": format_point(axis_aligned.collapse_point(shape)),
        "matrix": format_matrix(axis_aligned.la_closed_form(shape).matrix),
    }
    checks, code = None, EXIT_OK
    if args.verify:
        checks = [_check_incidence(A)]
        code = EXIT_OK if checks[0]["status"] == "pass" else EXIT_VERIFY
    return _report("collapse", {"verify": args.verify}, doc, A, results, checks), code


# -- verify -----------------------------------------------------------------------


def _skip(name: str, reason: str) -> dict:
    return {"name": name, "status": "skipped", "reason": reason}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _close(a, b, scale: float = 1.0) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= geom.get_epsilon() * max(1.0, scale)


def _check_trace(A: Polygon) -> dict:
    L = collineation.build_LA(A)
    t = collineation.trace(L)
    expected = 2 * A.n
    return {"name": "trace", "status": _status(_close(t, geom.convert(expected, A.mode), L.matrix.norm_inf())),
            "trace": format_scalar(t), "expected": expected}


def _check_conservation(A: Polygon) -> dict:
    try:
        rep = collineation.verify_conservation(A)
    except GeometryError as exc:
        return _skip("conservation", f"T(A) undefined: {type(exc).__name__}")
    return {"name": "conservation", "status": _status(rep.equal), "deviation": rep.deviation}


def _check_invariance(A: Polygon, rng: random.Random, trials: int = 10) -> dict:
    L = collineation.build_LA(A)
    p = collineation.charpoly(L)
    worst = 0.0
    ok = True
    for _ in range(trials):
        psi = collineation.random_unimodular(rng, mode=A.mode)
        q1 = collineation.charpoly(collineation.conjugate(L, psi))
        q2 = collineation.charpoly(collineation.build_LA(collineation.transformed_lifts(psi, A)))
        for q in (q1, q2):
            for a, b in zip(p.coefficients, q.coefficients):
                worst = max(worst, abs(float(a) - float(b)))
                scale = max(abs(float(a)), 1.0)
                ok = ok and _close(a, b, scale)
    return {"name": "invariance", "status": _status(ok), "trials": trials, "deviation": worst}


def _check_hull(A: Polygon, rng: random.Random, samples: int = 100) -> dict:
    if not geom.is_convex(A):
        return _skip("hull", "polygon is not convex")
    pts = [collineation.random_hull_point(rng, A) for _ in range(samples)]
    rep = collineation.verify_hull(A, pts)
    return {"name": "hull", "status": _status(rep.passed), "points": samples,
            "min_coefficient": format_scalar(rep.min_coefficient),
            "all_positive": rep.all_positive, "all_inside": rep.all_inside}


def _check_smalln(A: Polygon) -> dict:
    if A.n not in (5, 6):
        return _skip("smalln", "applies to pentagons and hexagons only")
    try:
        rep = collineation.verify_small_n(A)
    except GeometryError as exc:
        return _skip("smalln", f"iterate undefined: {type(exc).__name__}")
    return {"name": "smalln", "status": _status(rep.matched), "iterate": rep.iterate_power,
            "shift": rep.shift, "reversed": rep.reversed, "permutation": rep.permutation}


def _check_duality(A: Polygon) -> dict:
    if A.n < 4:
        return _skip("duality", "needs at least 4 vertices")
    try:
        rep = collineation.verify_duality(A)
    except GeometryError as exc:
        return _skip("duality", f"dual sequence degenerate: {type(exc).__name__}")
    return {"name": "duality", "status": _status(rep.passed),
            "alpha1_deviation": rep.alpha1_deviation, "alpha2_deviation": rep.alpha2_deviation}


def _check_incidence(A: Polygon) -> dict:
    shape = axis_aligned.detect(A)
    if shape is None:
        return _skip("incidence", "polygon is not axis-aligned")
    if shape.m > axis_aligned.DEFAULT_MAX_M:
        return _skip("incidence", f"m = {shape.m} exceeds cap {axis_aligned.DEFAULT_MAX_M}")
    rep = axis_aligned.verify_incidence(shape)
    out = {"name": "incidence", "status": _status(rep.passed), "m": rep.m, "steps": rep.steps,
           "max_deviation": rep.max_deviation,
           "meet": format_point(rep.meet) if rep.meet is not None else None,
           "expected": format_point(rep.expected)}
    if rep.error:
        out["error"] = rep.error
    return out


def cmd_verify(args) -> tuple:
    doc = _read_input(args.input)
    A = _polygon(doc)
    names = ALL_CHECKS if args.checks in (None, "all") else tuple(c.strip() for c in args.checks.split(","))
    unknown = [c for c in names if c not in ALL_CHECKS]
    if unknown:
        raise CommandError(EXIT_INPUT, f"unknown checks: {', '.join(unknown)}")
    if not geom.is_generic(A):
        raise CommandError(EXIT_INPUT, "degenerate polygon: three consecutive vertices are collinear")
    rng = random.Random(args.seed)
    checks = []
    for name in names:
        try:
            if name == "trace":
                checks.append(_check_trace(A))
            elif name == "conservation":
                checks.append(_check_conservation(A))
            elif name == "invariance":
                checks.append(_check_invariance(A, rng))
            elif name == "hull":
                checks.append(_check_hull(A, rng))
            elif name == "smalln":
                checks.append(_check_smalln(A))
            elif name == "duality":
                checks.append(_check_duality(A))
            elif name == "incidence":
                checks.append(_check_incidence(A))
        except GeometryError as exc:
            checks.append({"name": name, "status": "fail", "error": f"{type(exc).__name__}: {exc}"})
    failed = [c["name"] for c in checks if c["status"] == "fail"]
    results = {"passed": not failed, "failed": failed}
    flags = {"checks": list(names), "seed": args.seed}
    return _report("verify", flags, doc, A, results, checks), EXIT_VERIFY if failed else EXIT_OK


# -- render -------------------------------------------------------------------------


def cmd_render(args) -> tuple:
    from .render import render_svg

    doc = _read_input(args.input)
    A = _polygon(doc)
    try:
        polys = pentagram.orbit(A, args.k, _exact_steps(args))
    except (GeometryError, ValueError) as exc:
        raise CommandError(EXIT_ITERATION, _iteration_message(exc)) from None
    mark = None
    if args.mark_limit:
        try:
            mark = limit.limit_point(A).limit
        except NotConvex:
            raise CommandError(EXIT_INPUT, "NotConvex: --mark-limit requires a convex polygon") from None
        except (NoCandidateInHull, AmbiguousSelection) as exc:
            raise CommandError(EXIT_SELECTION, f"{type(exc).__name__}: {exc}") from None
        except (DegeneratePolygon, DegenerateTriple) as exc:
            raise CommandError(EXIT_INPUT, f"invalid polygon: {exc}") from None
    svg = render_svg(polys, mark, title=doc.name or "")
    if args.output in (None, "-"):
        sys.stdout.write(svg)
    else:
        try:
            Path(args.output).write_text(svg)
        except OSError as exc:
            raise CommandError(EXIT_INPUT, f"cannot write {args.output}: {exc.strerror}") from None
    return None, EXIT_OK


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help='polygon file (JSON or CSV), or "-" for stdin')
    common.add_argument("--epsilon", type=float, default=geom.DEFAULT_EPSILON,
                        help="absolute tolerance for float-mode degeneracy tests")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")

    parser = argparse.ArgumentParser(prog="pentalimit", description="Limit points of the pentagram map.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("la", parents=[common], help="print the conserved matrix, trace and charpoly")
    p.add_argument("--float", action="store_true", help="print decimals instead of exact rationals")
    p.set_defaults(func=cmd_la)

    p = sub.add_parser("limit", parents=[common], help="compute the limit point")
    p.add_argument("--method", choices=("eigen", "iterate", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-9, help="diameter tolerance of the iteration oracle")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("iterate", parents=[common], help="apply the pentagram map k times")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--exact-steps", type=int, default=None,
                   help=f"exact steps before switching to floats (default {DEFAULT_EXACT_STEPS})")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("collapse", parents=[common], help="point of collapse of an axis-aligned polygon")
    p.add_argument("--verify", action="store_true", help="also check the incidence statement")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("verify", parents=[common], help="run verification checks")
    p.add_argument("--checks", default="all", help="comma-separated subset of " + ",".join(ALL_CHECKS))
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", parents=[common], help="draw T^0..T^k as SVG")
    p.add_argument("-k", type=int, default=5)
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.add_argument("--mark-limit", action="store_true", help="mark the limit point")
    p.add_argument("--exact-steps", type=int, default=None)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", 0) is not None and getattr(args, "k", 0) < 0:
        parser.error("-k must be non-negative")
    if not args.epsilon > 0:
        parser.error("--epsilon must be positive")
    start = time.perf_counter()
    try:
        with geom.tolerance(args.epsilon):
            report, code = args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    if report is not None:
        if args.timing:
            report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
        sys.stdout.write(dumps_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
