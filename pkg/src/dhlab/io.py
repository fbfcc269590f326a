"""File formats: fixed-point JSON, polytope JSON, CSV, atomic writes.

Rationals travel as integers or "p/q" strings; JSON floats are rejected
outright so binary rounding can never contaminate the exact pipeline.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InputError
from .fixedpoints import FixedPointDatum, FixedPointSet
from .polynomial import PiecewisePoly, Poly
from .polytope import (
    Box,
    ExplicitSimplices,
    PolytopeSpec,
    Product,
    Simplex,
    StandardSimplex,
    VertexHull,
)


def rational_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{where}: not a rational: {value!r}") from exc
    raise InputError(f"{where}: expected an integer or 'p/q' string, got {value!r}")


def _reject_float(text: str) -> None:
    raise InputError(
        f"non-rational value {text!r}: write rationals as integers or 'p/q' strings"
    )


def loads_exact(text: str) -> Any:
    """json.loads with float literals rejected."""
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _read(path: str | Path) -> Any:
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    return loads_exact(path.read_text())


# -- fixed-point sets -------------------------------------------------------


def fixed_point_set_from_obj(obj: Any) -> FixedPointSet:
    if not isinstance(obj, dict):
        raise InputError("top level must be an object with 'n' and 'points'")
    if "n" not in obj or "points" not in obj:
        raise InputError("missing required keys 'n' and 'points'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"n: expected a positive integer, got {n!r}")
    if not isinstance(obj["points"], list):
        raise InputError("points: expected a list")
    points = []
    for i, rec in enumerate(obj["points"]):
        where = f"points[{i}]"
        if not isinstance(rec, dict):
            raise InputError(f"{where}: expected an object")
        if "mu" not in rec or "weights" not in rec:
            raise InputError(f"{where}: needs 'mu' and 'weights'")
        mu = parse_rational(rec["mu"], f"{where}.mu")
        weights = rec["weights"]
        if not isinstance(weights, list) or not weights:
            raise InputError(f"{where}.weights: expected a nonempty list of integers")
        for j, w in enumerate(weights):
            if not isinstance(w, int) or isinstance(w, bool) or w == 0:
                raise InputError(
                    f"{where}.weights[{j}]: weights must be nonzero integers, got {w!r}"
                )
        label = None
        if rec.get("label") is not None:
            raw = rec["label"]
            if not isinstance(raw, list) or any(
                not isinstance(x, int) or isinstance(x, bool) for x in raw
            ):
                raise InputError(f"{where}.label: expected a list of integers")
            label = frozenset(raw)
        try:
            points.append(FixedPointDatum(mu, tuple(weights), label))
        except InputError as exc:
            raise InputError(f"{where}: {exc}") from exc
    try:
        return FixedPointSet(n, tuple(points))
    except InputError as exc:
        raise InputError(str(exc)) from exc


def fixed_point_set_to_obj(s: FixedPointSet) -> dict:
    points = []
    for p in s.points:
        rec: dict[str, Any] = {
            "mu": _rational_json(p.mu),
            "weights": list(p.weights),
        }
        if p.label is not None:
            rec["label"] = sorted(p.label)
        points.append(rec)
    return {"n": s.n, "points": points}


def _rational_json(x: Fraction) -> Any:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fixed_point_file(path: str | Path) -> FixedPointSet:
    return fixed_point_set_from_obj(_read(path))


# -- polytopes ---------------------------------------------------------------


def polytope_from_obj(obj: Any, where: str = "polytope") -> PolytopeSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError(f"{where}: expected an object with a 'kind' tag")
    kind = obj["kind"]
    if kind == "box":
        sides = obj.get("sides")
        if not isinstance(sides, list) or not sides:
            raise InputError(f"{where}.sides: expected a nonempty list of [lo, hi] pairs")
        parsed = []
        for i, pair in enumerate(sides):
            if not isinstance(pair, list) or len(pair) != 2:
                raise InputError(f"{where}.sides[{i}]: expected [lo, hi]")
            parsed.append(
                (
                    parse_rational(pair[0], f"{where}.sides[{i}][0]"),
                    parse_rational(pair[1], f"{where}.sides[{i}][1]"),
                )
            )
        return Box(tuple(parsed))
    if kind == "standard_simplex":
        dim = obj.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise InputError(f"{where}.dim: expected a positive integer")
        scale = parse_rational(obj.get("scale", 1), f"{where}.scale")
        return StandardSimplex(dim, scale)
    if kind == "product":
        factors = obj.get("factors")
        if not isinstance(factors, list) or len(factors) < 2:
            raise InputError(f"{where}.factors: expected a list of at least two specs")
        return Product(
            tuple(
                polytope_from_obj(f, f"{where}.factors[{i}]")
                for i, f in enumerate(factors)
            )
        )
    if kind == "simplices":
        cells = obj.get("simplices")
        if not isinstance(cells, list) or not cells:
            raise InputError(f"{where}.simplices: expected a nonempty list")
        parsed_cells = []
        for i, verts in enumerate(cells):
            if not isinstance(verts, list):
                raise InputError(f"{where}.simplices[{i}]: expected a vertex list")
            parsed_cells.append(
                Simplex(
                    tuple(
                        tuple(
                            parse_rational(c, f"{where}.simplices[{i}][{j}][{k}]")
                            for k, c in enumerate(v)
                        )
                        for j, v in enumerate(verts)
                    )
                )
            )
        trusted = obj.get("trusted", True)
        if not isinstance(trusted, bool):
            raise InputError(f"{where}.trusted: expected a boolean")
        return ExplicitSimplices(tuple(parsed_cells), trusted)
    if kind == "vertex_hull":
        pts = obj.get("points")
        if not isinstance(pts, list) or not pts:
            raise InputError(f"{where}.points: expected a nonempty list of points")
        return VertexHull(
            tuple(
                tuple(parse_rational(c, f"{where}.points[{i}][{k}]") for k, c in enumerate(p))
                for i, p in enumerate(pts)
            )
        )
    raise InputError(f"{where}.kind: unknown polytope kind {kind!r}")


def polytope_to_obj(spec: PolytopeSpec) -> dict:
    if isinstance(spec, Box):
        return {
            "kind": "box",
            "sides": [[_rational_json(lo), _rational_json(hi)] for lo, hi in spec.sides],
        }
    if isinstance(spec, StandardSimplex):
        return {"kind": "standard_simplex", "dim": spec.dim, "scale": _rational_json(spec.scale)}
    if isinstance(spec, Product):
        return {"kind": "product", "factors": [polytope_to_obj(f) for f in spec.factors]}
    if isinstance(spec, ExplicitSimplices):
        return {
            "kind": "simplices",
            "simplices": [
                [[_rational_json(c) for c in v] for v in cell.vertices]
                for cell in spec.simplices
            ],
            "trusted": spec.interior_disjoint_trusted,
        }
    if isinstance(spec, VertexHull):
        return {
            "kind": "vertex_hull",
            "points": [[_rational_json(c) for c in p] for p in spec.points],
        }
    raise TypeError(f"not a polytope spec: {spec!r}")


def parse_polytope_file(path: str | Path) -> PolytopeSpec:
    return polytope_from_obj(_read(path))


# -- piecewise polynomials and CSV -------------------------------------------


def piecewise_to_obj(f: PiecewisePoly) -> dict:
    return {
        "breakpoints": [_rational_json(x) for x in f.breakpoints],
        "pieces": [[_rational_json(c) for c in p.coeffs] for p in f.pieces],
        "continuous": f.continuous,
    }


def density_csv(f: PiecewisePoly, steps_per_piece: int = 8) -> str:
    """CSV of (t, value) rows on a rational grid: every breakpoint appears
    exactly, with steps_per_piece equal subdivisions in between."""
    grid: list[Fraction] = []
    for lo, hi in zip(f.breakpoints, f.breakpoints[1:]):
        for j in range(steps_per_piece):
            grid.append(lo + (hi - lo) * j / steps_per_piece)
    grid.append(f.breakpoints[-1])
    lines = ["t,dh"]
    lines += [f"{rational_str(t)},{rational_str(f(t))}" for t in grid]
    return "\n".join(lines) + "\n"


# -- atomic writes ------------------------------------------------------------


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str | Path, obj: Any) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2) + "\n")
