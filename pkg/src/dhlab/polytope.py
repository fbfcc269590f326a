"""Exact slice-volume functions of convex polytopes.

This is the independent oracle for the fixed-point density engine: for a
polytope P and an integer direction xi, the derivative of
V(t) = vol(P intersect {<x, xi> <= t}) is the density of the pushforward of
Lebesgue measure under the height function, which for a Delzant polytope is
the density of the corresponding toric circle action.

Sublevel volumes are computed per simplex through the truncated-power
divided-difference formula over the vertex heights (the Hermite-Genocchi
identity): with nodes h_0 <= ... <= h_l and g(s) = (s - t)_+^l, the divided
difference [h_0, ..., h_l] g equals the volume fraction of the simplex above
t, and repeated nodes are handled by derivative entries, so tied heights
need no perturbation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence, Union

from . import linalg
from .errors import InputError, InvariantViolation
from .polynomial import PiecewisePoly, Poly, Scalar, as_fraction, constant_piecewise

Point = tuple[Fraction, ...]


def _as_point(values: Iterable[Scalar]) -> Point:
    return tuple(as_fraction(v) for v in values)


@dataclass(frozen=True)
class Simplex:
    """Full-dimensional simplex given by its l+1 affinely independent vertices."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", tuple(_as_point(v) for v in self.vertices)
        )
        dim = self.dim
        if any(len(v) != dim for v in self.vertices):
            raise InputError("simplex vertices of mixed dimension")
        if len(self.vertices) != dim + 1:
            raise InputError(
                f"a {dim}-simplex needs {dim + 1} vertices, got {len(self.vertices)}"
            )
        if self.volume == 0:
            raise InputError("degenerate simplex (affinely dependent vertices)")

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @property
    def volume(self) -> Fraction:
        base = self.vertices[0]
        rows = [
            [c - b for c, b in zip(v, base)] for v in self.vertices[1:]
        ]
        return abs(linalg.det(rows)) / factorial(self.dim)

    def heights(self, direction: Sequence[int]) -> list[Fraction]:
        return [
            sum((c * d for c, d in zip(v, direction)), Fraction(0))
            for v in self.vertices
        ]


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, a product of closed intervals."""

    sides: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        sides = tuple((as_fraction(lo), as_fraction(hi)) for lo, hi in self.sides)
        object.__setattr__(self, "sides", sides)
        if not sides:
            raise InputError("box needs at least one side")
        if any(lo >= hi for lo, hi in sides):
            raise InputError("box sides must have positive length")


@dataclass(frozen=True)
class StandardSimplex:
    """conv{0, scale*e_1, ..., scale*e_dim}."""

    dim: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_fraction(self.scale))
        if self.dim < 1:
            raise InputError("simplex dimension must be positive")
        if self.scale <= 0:
            raise InputError("simplex scale must be positive")


@dataclass(frozen=True)
class Product:
    factors: tuple["PolytopeSpec", ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) < 2:
            raise InputError("product needs at least two factors")


@dataclass(frozen=True)
class ExplicitSimplices:
    """A region tiled by explicitly given simplices.

    Pairwise interior-disjointness is accepted on trust; the flag records
    that the input was not certified.
    """

    simplices: tuple[Simplex, ...]
    interior_disjoint_trusted: bool = True

    def __post_init__(self):
        object.__setattr__(self, "simplices", tuple(self.simplices))
        if not self.simplices:
            raise InputError("need at least one simplex")
        dim = self.simplices[0].dim
        if any(s.dim != dim for s in self.simplices):
            raise InputError("simplices of mixed dimension")


@dataclass(frozen=True)
class VertexHull:
    """Convex hull of explicit rational points; triangulated exactly by
    incremental (beneath-beyond) insertion.  Supported up to dimension 6."""

    points: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(_as_point(p) for p in self.points))
        if not self.points:
            raise InputError("hull needs points")
        dim = len(self.points[0])
        if any(len(p) != dim for p in self.points):
            raise InputError("hull points of mixed dimension")
        if dim > 6:
            raise InputError("hull triangulation supported only up to dimension 6")


PolytopeSpec = Union[Box, StandardSimplex, Product, ExplicitSimplices, VertexHull]


def dimension(spec: PolytopeSpec) -> int:
    if isinstance(spec, Box):
        return len(spec.sides)
    if isinstance(spec, StandardSimplex):
        return spec.dim
    if isinstance(spec, Product):
        return sum(dimension(f) for f in spec.factors)
    if isinstance(spec, ExplicitSimplices):
        return spec.simplices[0].dim
    if isinstance(spec, VertexHull):
        return len(spec.points[0])
    raise TypeError(f"not a polytope spec: {spec!r}")


def closed_form_volume(spec: PolytopeSpec) -> Fraction | None:
    """Product-of-side-lengths style volume, where one exists."""
    if isinstance(spec, Box):
        out = Fraction(1)
        for lo, hi in spec.sides:
            out *= hi - lo
        return out
    if isinstance(spec, StandardSimplex):
        return spec.scale**spec.dim / factorial(spec.dim)
    if isinstance(spec, Product):
        out = Fraction(1)
        for f in spec.factors:
            v = closed_form_volume(f)
            if v is None:
                return None
            out *= v
        return out
    return None


# ---------------------------------------------------------------------------
# Triangulation
# ---------------------------------------------------------------------------


def _staircase_product(a: Simplex, b: Simplex) -> list[Simplex]:
    """Standard staircase triangulation of a product of two simplices: one
    cell per monotone lattice path through the vertex grid."""
    out = []
    pa, pb = a.vertices, b.vertices
    path: list[tuple[int, int]] = [(0, 0)]

    def walk(i: int, j: int):
        if i == len(pa) - 1 and j == len(pb) - 1:
            out.append(Simplex(tuple(pa[x] + pb[y] for x, y in path)))
            return
        if i < len(pa) - 1:
            path.append((i + 1, j))
            walk(i + 1, j)
            path.pop()
        if j < len(pb) - 1:
            path.append((i, j + 1))
            walk(i, j + 1)
            path.pop()

    walk(0, 0)
    return out


def _product_triangulations(parts: Sequence[list[Simplex]]) -> list[Simplex]:
    cells = parts[0]
    for nxt in parts[1:]:
        cells = [t for a in cells for b in nxt for t in _staircase_product(a, b)]
    return cells


def triangulate(spec: PolytopeSpec) -> list[Simplex]:
    """Interior-disjoint simplices whose union is the polytope.

    For box, product, and standard-simplex inputs the total simplex volume is
    checked against the closed-form volume.
    """
    if isinstance(spec, Box):
        segments = [
            [Simplex(((lo,), (hi,)))] for lo, hi in spec.sides
        ]
        cells = _product_triangulations(segments)
    elif isinstance(spec, StandardSimplex):
        zero = tuple(Fraction(0) for _ in range(spec.dim))
        verts = [zero] + [
            tuple(
                spec.scale if j == i else Fraction(0) for j in range(spec.dim)
            )
            for i in range(spec.dim)
        ]
        cells = [Simplex(tuple(verts))]
    elif isinstance(spec, Product):
        cells = _product_triangulations([triangulate(f) for f in spec.factors])
    elif isinstance(spec, ExplicitSimplices):
        cells = list(spec.simplices)
    elif isinstance(spec, VertexHull):
        cells = _hull_triangulation(list(spec.points))
    else:
        raise TypeError(f"not a polytope spec: {spec!r}")

    reference = closed_form_volume(spec)
    if reference is not None:
        total = sum((c.volume for c in cells), Fraction(0))
        if total != reference:
            raise InvariantViolation(
                f"triangulation volume {total} != closed form {reference}"
            )
    return cells


def _hyperplane(points: Sequence[Point], inside: Point) -> tuple[tuple[Fraction, ...], Fraction]:
    """Hyperplane through d points of R^d as (normal, offset), oriented so
    that normal . inside < offset."""
    base = points[0]
    rows = [[c - b for c, b in zip(p, base)] for p in points[1:]]
    d = len(base)
    normal = []
    for j in range(d):
        minor = [[row[i] for i in range(d) if i != j] for row in rows]
        sign = -1 if j % 2 else 1
        normal.append(sign * (linalg.det(minor) if minor else Fraction(1)))
    offset = sum((a * c for a, c in zip(normal, base)), Fraction(0))
    value = sum((a * c for a, c in zip(normal, inside)), Fraction(0))
    if value > offset:
        normal = [-a for a in normal]
        offset = -offset
    elif value == offset:
        raise InvariantViolation("orientation reference lies on the facet hyperplane")
    return tuple(normal), offset


def _affine_rank(points: Sequence[Point]) -> int:
    if len(points) < 2:
        return 0
    base = points[0]
    rows = [[c - b for c, b in zip(p, base)] for p in points[1:]]
    return linalg.rank(rows)


def _hull_triangulation(points: list[Point]) -> list[Simplex]:
    """Incremental beneath-beyond triangulation of the convex hull."""
    dim = len(points[0])
    unique = list(dict.fromkeys(points))
    if _affine_rank(unique) < dim:
        raise InputError("hull input is lower-dimensional (degenerate)")

    # greedy affinely independent seed simplex
    seed = [unique[0]]
    for p in unique[1:]:
        if _affine_rank(seed + [p]) > _affine_rank(seed):
            seed.append(p)
        if len(seed) == dim + 1:
            break
    seed_set = set(seed)
    simplices = [Simplex(tuple(seed))]

    facets: dict[frozenset[Point], tuple[tuple[Fraction, ...], Fraction]] = {}
    for skip in seed:
        face = [v for v in seed if v != skip]
        facets[frozenset(face)] = _hyperplane(face, skip)

    for p in unique:
        if p in seed_set:
            continue
        visible = [
            fkey
            for fkey, (normal, offset) in facets.items()
            if sum((a * c for a, c in zip(normal, p)), Fraction(0)) > offset
        ]
        if not visible:
            continue
        fresh: dict[frozenset[Point], Point] = {}
        duplicated: set[frozenset[Point]] = set()
        for fkey in visible:
            del facets[fkey]
            cell = Simplex(tuple(fkey) + (p,))
            simplices.append(cell)
            for skip in fkey:
                side = (fkey - {skip}) | {p}
                side_key = frozenset(side)
                if side_key in fresh or side_key in duplicated:
                    fresh.pop(side_key, None)
                    duplicated.add(side_key)
                else:
                    fresh[side_key] = skip
        for side_key, opposite in fresh.items():
            facets[side_key] = _hyperplane(list(side_key), opposite)
    return simplices


# ---------------------------------------------------------------------------
# Sublevel volumes and slice densities
# ---------------------------------------------------------------------------


def _truncated_power(node: Fraction, exponent: int, grid: Sequence[Fraction]) -> PiecewisePoly:
    """(node - t)_+^exponent as a piecewise polynomial in t on the grid.

    The grid contains node, so each piece is either the full polynomial
    (left of node) or zero (right of it)."""
    expanded = Poly((node, -1)) ** exponent
    pieces = [
        expanded if lo < node else Poly.zero()
        for lo in grid[:-1]
    ]
    return PiecewisePoly(grid, pieces)


def _simplex_fraction_above(heights: Sequence[Fraction], grid: Sequence[Fraction]) -> PiecewisePoly:
    """Divided difference [h_0..h_l] (s - t)_+^l over the sorted vertex
    heights: the fraction of the simplex volume above level t.

    Repeated nodes use the Hermite convention: a (k+1)-fold node h
    contributes g^(k)(h)/k! = C(l, k) (h - t)_+^(l-k)."""
    nodes = sorted(heights)
    ell = len(nodes) - 1
    table = [
        _truncated_power(node, ell, grid) for node in nodes
    ]
    for k in range(1, ell + 1):
        nxt = []
        for i in range(len(nodes) - k):
            lo, hi = nodes[i], nodes[i + k]
            if lo == hi:
                nxt.append(
                    _truncated_power(lo, ell - k, grid) * comb(ell, k)
                )
            else:
                nxt.append((table[i + 1] - table[i]) / (hi - lo))
        table = nxt
    return table[0]


def sublevel_volume(spec: PolytopeSpec, direction: Sequence[int]) -> PiecewisePoly:
    """V(t) = vol(spec intersect {<x, direction> <= t}), exactly.

    Defined on [min height, max height] with breakpoints at the distinct
    vertex heights; V is 0 at the bottom and the total volume at the top.
    """
    direction = tuple(int(d) for d in direction)
    if all(d == 0 for d in direction):
        raise InputError("direction must be nonzero")
    if len(direction) != dimension(spec):
        raise InputError("direction dimension does not match the polytope")
    cells = triangulate(spec)
    heights = [cell.heights(direction) for cell in cells]
    grid = sorted({h for hs in heights for h in hs})
    if len(grid) < 2:
        raise InvariantViolation("all vertex heights coincide on a full-dimensional cell")
    total = sum((cell.volume for cell in cells), Fraction(0))
    volume = constant_piecewise(total, grid)
    for cell, hs in zip(cells, heights):
        volume = volume - _simplex_fraction_above(hs, grid) * cell.volume
    lo, hi = volume.domain
    if volume(lo) != 0 or volume(hi) != total:
        raise InvariantViolation("sublevel volume endpoints are wrong")
    return volume


def slice_density(spec: PolytopeSpec, direction: Sequence[int]) -> PiecewisePoly:
    """Derivative of the sublevel volume: the exact slice-volume density.

    At a breakpoint the reported value is the right limit, matching the
    fixed-point density convention.
    """
    return sublevel_volume(spec, direction).derivative()


# ---------------------------------------------------------------------------
# Toric vertex/edge data for specs with canonical combinatorics
# ---------------------------------------------------------------------------


def toric_data(spec: PolytopeSpec) -> tuple[list[Point], list[list[tuple[int, ...]]]]:
    """(vertices, primitive edge directions per vertex) for specs that carry
    canonical Delzant combinatorics: boxes, standard simplices, and products
    of such."""
    if isinstance(spec, Box):
        vertices = []
        edges = []
        for choice in itertools.product((0, 1), repeat=len(spec.sides)):
            vertices.append(
                tuple(side[pick] for side, pick in zip(spec.sides, choice))
            )
            edges.append(
                [
                    tuple(
                        (1 if pick == 0 else -1) if j == i else 0
                        for j in range(len(spec.sides))
                    )
                    for i, pick in enumerate(choice)
                ]
            )
        return vertices, edges
    if isinstance(spec, StandardSimplex):
        d = spec.dim
        zero = tuple(Fraction(0) for _ in range(d))
        unit = lambda i: tuple(1 if j == i else 0 for j in range(d))
        vertices: list[Point] = [zero]
        edges = [[unit(i) for i in range(d)]]
        for i in range(d):
            vertices.append(tuple(spec.scale if j == i else Fraction(0) for j in range(d)))
            dirs = [tuple(-c for c in unit(i))]
            dirs += [
                tuple(u - v for u, v in zip(unit(j), unit(i)))
                for j in range(d)
                if j != i
            ]
            edges.append(dirs)
        return vertices, edges
    if isinstance(spec, Product):
        verts_parts = []
        edges_parts = []
        dims = [dimension(f) for f in spec.factors]
        for f in spec.factors:
            v, e = toric_data(f)
            verts_parts.append(v)
            edges_parts.append(e)
        vertices = []
        edges = []
        for combo in itertools.product(*(range(len(v)) for v in verts_parts)):
            point: tuple = ()
            dirs: list[tuple[int, ...]] = []
            for part, (vidx, vlist, elist, d) in enumerate(
                zip(combo, verts_parts, edges_parts, dims)
            ):
                point = point + vlist[vidx]
                before = sum(dims[:part])
                after = sum(dims[part + 1 :])
                dirs += [
                    (0,) * before + e + (0,) * after for e in elist[vidx]
                ]
            vertices.append(point)
            edges.append(dirs)
        return vertices, edges
    raise InputError(
        f"{type(spec).__name__} carries no canonical toric vertex/edge data"
    )
