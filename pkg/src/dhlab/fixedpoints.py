"""Fixed-point data of Hamiltonian circle actions.

The complete input datum is a finite list of isolated fixed points, each
carrying its moment-map value and the integer weights of the tangential
circle representation.  Everything downstream (density computation,
log-concavity, the cohomology model) consumes this data only.

Conventions: the Morse index of a point is twice its number of negative
weights, and m_F denotes the product of all weights at F.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb, prod
from typing import Iterable, Sequence

from .errors import InputError
from .polynomial import Scalar, as_fraction


@dataclass(frozen=True)
class FixedPointDatum:
    """One isolated fixed point: moment value, weights, optional subset label.

    The label, when present, is the subset of {1..n} identifying the point in
    the product-of-spheres combinatorial model; a point of index 2k carries a
    k-element label.
    """

    mu: Fraction
    weights: tuple[int, ...]
    label: frozenset[int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "mu", as_fraction(self.mu))
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights:
            raise InputError("a fixed point needs at least one weight")
        for w in self.weights:
            if not isinstance(w, int) or isinstance(w, bool) or w == 0:
                raise InputError(f"weights must be nonzero integers, got {w!r}")
        if self.label is not None:
            object.__setattr__(self, "label", frozenset(self.label))
            if 2 * len(self.label) != self.index:
                raise InputError(
                    f"label size {len(self.label)} incompatible with index {self.index}"
                )

    @property
    def index(self) -> int:
        """Morse index: twice the number of negative weights."""
        return 2 * sum(1 for w in self.weights if w < 0)

    @property
    def weight_product(self) -> int:
        """m_F, the product of all weights (the scalar in the Euler class)."""
        return prod(self.weights)


@dataclass(frozen=True)
class FixedPointSet:
    """Fixed-point data of a (claimed) 2n-dimensional Hamiltonian S^1-manifold."""

    n: int
    points: tuple[FixedPointDatum, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.n < 1:
            raise InputError("n must be a positive integer")
        for i, p in enumerate(self.points):
            if len(p.weights) != self.n:
                raise InputError(
                    f"points[{i}]: expected {self.n} weights, got {len(p.weights)}"
                )
            if p.label is not None and any(not 1 <= j <= self.n for j in p.label):
                raise InputError(f"points[{i}]: label entries must lie in 1..{self.n}")

    def levels(self) -> list[Fraction]:
        """Sorted distinct moment values (the critical levels)."""
        return sorted({p.mu for p in self.points})

    @property
    def min_level(self) -> Fraction:
        return min(p.mu for p in self.points)

    @property
    def max_level(self) -> Fraction:
        return max(p.mu for p in self.points)

    @property
    def labeled(self) -> bool:
        return bool(self.points) and all(p.label is not None for p in self.points)


@dataclass(frozen=True)
class ValidationReport:
    is_semifree: bool
    index_counts: tuple[int, ...]
    binomial_ok: bool
    distinct_levels: tuple[Fraction, ...]
    messages: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "is_semifree": self.is_semifree,
            "index_counts": list(self.index_counts),
            "binomial_ok": self.binomial_ok,
            "distinct_levels": [str(x) for x in self.distinct_levels],
            "messages": list(self.messages),
        }


def validate(s: FixedPointSet) -> ValidationReport:
    """Check the combinatorial signatures a compact semifree model must show.

    A semifree action with isolated fixed points has exactly C(n, k) points
    of index 2k, so binomial_ok is a strong realizability filter.  Data that
    fails is still accepted by the density engine; only the cohomology model
    requires the semifree product structure.
    """
    if not s.points:
        raise InputError("cannot validate an empty fixed-point set")
    counts = [0] * (s.n + 1)
    for p in s.points:
        counts[p.index // 2] += 1
    semifree = all(abs(w) == 1 for p in s.points for w in p.weights)
    binomial_ok = all(counts[k] == comb(s.n, k) for k in range(s.n + 1))
    messages = []
    if not any(p.index == 0 for p in s.points):
        messages.append("no point with all weights positive (no minimum)")
    if not any(p.index == 2 * s.n for p in s.points):
        messages.append("no point with all weights negative (no maximum)")
    if not semifree:
        messages.append("weights outside {-1, +1}: action is not semifree")
    if not binomial_ok:
        messages.append(
            "index counts "
            + str(tuple(counts))
            + " differ from the binomial pattern "
            + str(tuple(comb(s.n, k) for k in range(s.n + 1)))
        )
    return ValidationReport(
        is_semifree=semifree,
        index_counts=tuple(counts),
        binomial_ok=binomial_ok,
        distinct_levels=tuple(s.levels()),
        messages=tuple(messages),
    )


def _subsets_sorted(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, n + 1), k))


def gen_spheres(sizes: Sequence[Scalar], min_level: Scalar = 0) -> FixedPointSet:
    """Fixed-point data of a product of n two-spheres with the diagonal
    semifree circle action.

    sizes[i] is the symplectic area of the i-th sphere.  For each subset S of
    {1..n} there is one point at min_level + sum over S of sizes, with weight
    -1 in every coordinate of S and +1 elsewhere; its label is S.
    """
    sizes = [as_fraction(x) for x in sizes]
    if not sizes:
        raise InputError("need at least one sphere size")
    if any(x <= 0 for x in sizes):
        raise InputError("sphere sizes must be positive")
    base = as_fraction(min_level)
    n = len(sizes)
    points = []
    for k in range(n + 1):
        for subset in _subsets_sorted(n, k):
            chosen = set(subset)
            mu = base + sum((sizes[i - 1] for i in chosen), Fraction(0))
            weights = tuple(-1 if i in chosen else 1 for i in range(1, n + 1))
            points.append(FixedPointDatum(mu, weights, frozenset(chosen)))
    return FixedPointSet(n, tuple(points))


def gen_toric(
    vertices: Sequence[Sequence[Scalar]],
    edges_at_vertex: Sequence[Sequence[Sequence[int]]],
    direction: Sequence[int],
) -> FixedPointSet:
    """Fixed-point data of a toric manifold restricted to a circle subgroup.

    Each vertex of the (simple) moment polytope contributes one fixed point
    with mu = <vertex, direction> and weights <e, direction> over its
    primitive edge directions e.  The direction must pair nonzero with every
    edge (a generic circle).
    """
    direction = tuple(int(x) for x in direction)
    if not vertices:
        raise InputError("need at least one vertex")
    dim = len(vertices[0])
    if len(direction) != dim:
        raise InputError("direction dimension does not match the vertices")
    if len(edges_at_vertex) != len(vertices):
        raise InputError("need one edge list per vertex")
    points = []
    for vi, (vertex, edges) in enumerate(zip(vertices, edges_at_vertex)):
        if len(vertex) != dim:
            raise InputError(f"vertex {vi} has dimension {len(vertex)}, expected {dim}")
        if len(edges) != dim:
            raise InputError(
                f"vertex {vi} has {len(edges)} edge directions, expected {dim} "
                "(the polytope must be simple)"
            )
        mu = sum((as_fraction(c) * d for c, d in zip(vertex, direction)), Fraction(0))
        weights = []
        for e in edges:
            w = sum(int(c) * d for c, d in zip(e, direction))
            if w == 0:
                raise InputError(
                    f"direction {direction} is orthogonal to edge {tuple(e)} "
                    f"at vertex {vi}: not a generic circle"
                )
            weights.append(w)
        points.append(FixedPointDatum(mu, tuple(weights)))
    return FixedPointSet(dim, tuple(points))


class LabelMatchingError(InputError):
    """Raised when moment values cannot be matched to subset sums."""


def reconstruct_labels(s: FixedPointSet) -> FixedPointSet:
    """Assign product-model subset labels from moment values alone.

    With m0 the moment value of the index-0 point and m_i the increments to
    the index-2 points (in input order), a point of index 2k must sit at
    m0 + sum of m_i over some k-subset; the assignment matches points to
    subsets by exact equality of these sums.  Ties are broken
    deterministically: among subsets with equal sums, the lexicographically
    smallest goes to the earliest unmatched point.
    """
    report = validate(s)
    if not report.is_semifree or not report.binomial_ok:
        raise InputError(
            "label reconstruction needs semifree data with binomial index counts; "
            + "; ".join(report.messages)
        )
    minimum = next(p for p in s.points if p.index == 0)
    m0 = minimum.mu
    increments = [p.mu - m0 for p in s.points if p.index == 2]

    relabeled: dict[int, frozenset[int]] = {}
    for k in range(s.n + 1):
        point_ids = [i for i, p in enumerate(s.points) if p.index == 2 * k]
        by_sum: dict[Fraction, list[tuple[int, ...]]] = {}
        for subset in _subsets_sorted(s.n, k):
            total = m0 + sum((increments[i - 1] for i in subset), Fraction(0))
            by_sum.setdefault(total, []).append(subset)
        remaining = {mu: list(subs) for mu, subs in by_sum.items()}
        for i in point_ids:
            mu = s.points[i].mu
            if not remaining.get(mu):
                raise LabelMatchingError(
                    f"no unused {k}-subset sums to moment value {mu} at index {2 * k}"
                )
            relabeled[i] = frozenset(remaining[mu].pop(0))
        leftovers = [subs for subs in remaining.values() if subs]
        if leftovers:
            raise LabelMatchingError(
                f"unmatched {k}-subsets remain at index {2 * k}: {leftovers}"
            )
    points = tuple(
        replace(p, label=relabeled[i]) for i, p in enumerate(s.points)
    )
    return FixedPointSet(s.n, points)


def localization_identity(s: FixedPointSet, k: int, t: Scalar) -> Fraction:
    """Sum over all fixed points of (mu(F) - t)^k / m_F.

    For data arising from a compact manifold this vanishes for every
    0 <= k <= n-1 (the residue sum of a class of too-low degree), which makes
    it a cheap realizability test.
    """
    if not 0 <= k <= s.n - 1:
        raise ValueError(f"k must satisfy 0 <= k <= n-1 = {s.n - 1}, got {k}")
    if not s.points:
        raise InputError("empty fixed-point set")
    t = as_fraction(t)
    return sum(
        ((p.mu - t) ** k / p.weight_product for p in s.points), Fraction(0)
    )
