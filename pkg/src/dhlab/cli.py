"""Command-line surface.

Exit codes: 0 success, 1 input error, 2 verdict violated (log-concavity or
Lefschetz failure), 3 internal invariant breach.  The optional environment
variable DH_LAB_THREADS caps the Monte Carlo worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import io
from .cohomology import ambient_lefschetz_check, hard_lefschetz_check, reduced_betti
from .dh import dh_piecewise, gls_jump_check, log_concavity_check
from .errors import InputError, InvariantViolation
from .fixedpoints import FixedPointSet, gen_spheres, gen_toric, reconstruct_labels, validate
from .montecarlo import mc_density
from .polytope import slice_density, toric_data

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATED = 2
EXIT_INTERNAL = 3


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(part) for part in text.split(",") if part != ""]


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise InputError(f"not an integer list: {text!r}") from exc


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _labeled(s: FixedPointSet) -> FixedPointSet:
    return s if s.labeled else reconstruct_labels(s)


def _emit(data: dict, output: str | None) -> None:
    if output:
        io.write_json(output, data)
        print(output)
    else:
        _print_json(data)


def _cmd_validate(args) -> int:
    report = validate(io.parse_fixed_point_file(args.input))
    _print_json(report.to_dict())
    return EXIT_OK


def _cmd_dh(args) -> int:
    s = io.parse_fixed_point_file(args.input)
    density = dh_piecewise(s)
    if args.at is not None:
        lo, hi = density.domain
        if not lo <= args.at <= hi:
            raise InputError(f"{args.at} outside the moment image [{lo}, {hi}]")
        print(io.rational_str(density(args.at)))
    else:
        _print_json(io.piecewise_to_obj(density))
    return EXIT_OK


def _cmd_check(args) -> int:
    report = log_concavity_check(io.parse_fixed_point_file(args.input))
    _print_json(report.to_dict())
    return EXIT_OK if report.verdict == "log_concave" else EXIT_VIOLATED


def _cmd_jumps(args) -> int:
    s = io.parse_fixed_point_file(args.input)
    checks = gls_jump_check(s)
    _print_json([c.to_dict() for c in checks])
    if not all(c.passed for c in checks):
        # the jump formula is a consequence of the construction; a failure
        # means the engine itself is broken
        raise InvariantViolation("jump formula check failed")
    return EXIT_OK


def _cmd_gen_spheres(args) -> int:
    s = gen_spheres(args.sizes, args.min_level)
    _emit(io.fixed_point_set_to_obj(s), args.output)
    return EXIT_OK


def _cmd_gen_toric(args) -> int:
    spec = io.parse_polytope_file(args.polytope)
    vertices, edges = toric_data(spec)
    s = gen_toric(vertices, edges, args.direction)
    _emit(io.fixed_point_set_to_obj(s), args.output)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    spec = io.parse_polytope_file(args.polytope)
    if args.mc_samples is not None:
        if args.at is None:
            raise InputError("--mc-samples needs --at")
        workers = args.workers
        cap = os.environ.get("DH_LAB_THREADS")
        if cap is not None:
            workers = min(workers, max(int(cap), 1))
        estimate = mc_density(
            spec, args.direction, args.at, args.mc_samples, args.seed, workers
        )
        _print_json(estimate.to_dict())
        return EXIT_OK
    density = slice_density(spec, args.direction)
    if args.at is not None:
        lo, hi = density.domain
        if not lo <= args.at <= hi:
            raise InputError(f"{args.at} outside the height range [{lo}, {hi}]")
        print(io.rational_str(density(args.at)))
    else:
        _print_json(io.piecewise_to_obj(density))
    return EXIT_OK


def _cmd_cohomology(args) -> int:
    s = _labeled(io.parse_fixed_point_file(args.input))
    betti = reduced_betti(s, args.level)
    _print_json({"level": str(args.level), "betti": betti})
    return EXIT_OK


def _cmd_lefschetz(args) -> int:
    s = _labeled(io.parse_fixed_point_file(args.input))
    reduced = hard_lefschetz_check(s, args.level)
    ambient = ambient_lefschetz_check(s)
    _print_json({"reduced": reduced.to_dict(), "ambient": ambient.to_dict()})
    ok = reduced.lefschetz_ok and ambient.lefschetz_ok
    return EXIT_OK if ok else EXIT_VIOLATED


def _cmd_plot(args) -> int:
    from . import plotting  # matplotlib import deferred to the one command using it

    s = io.parse_fixed_point_file(args.input)
    density = dh_piecewise(s)
    csv_path = f"{args.output}.csv"
    svg_path = f"{args.output}.svg"
    io.atomic_write_text(csv_path, io.density_csv(density, args.grid))
    plotting.render_density_figure(density, svg_path)
    print(csv_path)
    print(svg_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dhlab",
        description=(
            "Exact Duistermaat-Heckman densities, log-concavity verdicts, and "
            "hard Lefschetz checks from circle-action fixed-point data."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def p_input(p):
        p.add_argument("--input", required=True, help="fixed-point JSON file")

    p = sub.add_parser("validate", help="combinatorial sanity report for a dataset")
    p_input(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("dh", help="exact density, as one value or all pieces")
    p_input(p)
    p.add_argument("--at", type=_rational, help="evaluate at this rational t")
    p.set_defaults(fn=_cmd_dh)

    p = sub.add_parser("check", help="log-concavity verdict (exit 2 when violated)")
    p_input(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("jumps", help="wall-crossing jump formula self-test")
    p_input(p)
    p.set_defaults(fn=_cmd_jumps)

    p = sub.add_parser("gen-spheres", help="fixed-point data of a product of spheres")
    p.add_argument("--sizes", type=_rational_list, required=True, help="e.g. 2,3,6")
    p.add_argument("--min-level", type=_rational, default=Fraction(0))
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(fn=_cmd_gen_spheres)

    p = sub.add_parser("gen-toric", help="fixed-point data of a toric polytope")
    p.add_argument("--polytope", required=True, help="polytope JSON file")
    p.add_argument("--direction", type=_int_list, required=True, help="e.g. 1,1,1")
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(fn=_cmd_gen_toric)

    p = sub.add_parser("oracle", help="exact polytope slice density (or Monte Carlo)")
    p.add_argument("--polytope", required=True, help="polytope JSON file")
    p.add_argument("--direction", type=_int_list, required=True)
    p.add_argument("--at", type=_rational)
    p.add_argument("--mc-samples", type=int, help="Monte Carlo estimate instead (needs --at)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("cohomology", help="reduced-space Betti numbers at a level")
    p_input(p)
    p.add_argument("--level", type=_rational, required=True)
    p.set_defaults(fn=_cmd_cohomology)

    p = sub.add_parser("lefschetz", help="hard Lefschetz check at a level (exit 2 on failure)")
    p_input(p)
    p.add_argument("--level", type=_rational, required=True)
    p.set_defaults(fn=_cmd_lefschetz)

    p = sub.add_parser("plot", help="CSV + SVG panels of the density and its log")
    p_input(p)
    p.add_argument("--output", required=True, help="output path prefix")
    p.add_argument("--grid", type=int, default=8, help="grid steps per piece in the CSV")
    p.set_defaults(fn=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold that into the input-error code
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
