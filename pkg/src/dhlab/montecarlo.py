"""Seeded Monte Carlo estimates of slice densities.

This is a float-based sanity oracle next to the exact engine.  Sampling uses
a fixed, documented counter-based generator in the linear-congruential
family (a Weyl sequence with a 64-bit mixing finalizer, the SplitMix64
construction), so estimates are bit-reproducible from (seed, samples) alone
and workers can split the index range without coordination:

    state_i = (seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2^64
    z = state_i;  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9  (mod 2^64)
    z ^= z >> 27;               z *= 0x94D049BB133111EB  (mod 2^64)
    z ^= z >> 31
    uniform_i = (z >> 11) / 2^53

Sample i of dimension d consumes uniforms at indices i*d .. i*d+d-1.  The
estimate at t counts hits of the slab |<x, xi> - t| <= delta inside the
polytope, over uniforms in the bounding box, with delta fixed to one
thousandth of the height range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .polynomial import Scalar, as_fraction
from .polytope import (
    Box,
    ExplicitSimplices,
    PolytopeSpec,
    Product,
    StandardSimplex,
    VertexHull,
    dimension,
    triangulate,
)

_WEYL = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """count uniforms in [0, 1) at indices start..start+count-1 of the stream."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _WEYL
        z ^= z >> np.uint64(30)
        z *= _MIX1
        z ^= z >> np.uint64(27)
        z *= _MIX2
        z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def _bounding_box(spec: PolytopeSpec) -> list[tuple[Fraction, Fraction]]:
    cells = triangulate(spec)
    dim = cells[0].dim
    los = [min(v[i] for c in cells for v in c.vertices) for i in range(dim)]
    his = [max(v[i] for c in cells for v in c.vertices) for i in range(dim)]
    return list(zip(los, his))


def _membership(spec: PolytopeSpec, pts: np.ndarray) -> np.ndarray:
    """Boolean mask of points inside the polytope (float arithmetic)."""
    if isinstance(spec, Box):
        mask = np.ones(len(pts), dtype=bool)
        for i, (lo, hi) in enumerate(spec.sides):
            mask &= (pts[:, i] >= float(lo)) & (pts[:, i] <= float(hi))
        return mask
    if isinstance(spec, StandardSimplex):
        return (pts >= 0).all(axis=1) & (pts.sum(axis=1) <= float(spec.scale))
    if isinstance(spec, Product):
        mask = np.ones(len(pts), dtype=bool)
        offset = 0
        for f in spec.factors:
            d = dimension(f)
            mask &= _membership(f, pts[:, offset : offset + d])
            offset += d
        return mask
    if isinstance(spec, (ExplicitSimplices, VertexHull)):
        mask = np.zeros(len(pts), dtype=bool)
        for cell in triangulate(spec):
            base = np.array([float(x) for x in cell.vertices[0]])
            mat = np.array(
                [[float(c - b) for c, b in zip(v, cell.vertices[0])] for v in cell.vertices[1:]]
            ).T
            coords = np.linalg.solve(mat, (pts - base).T).T
            inside = (coords >= 0).all(axis=1) & (coords.sum(axis=1) <= 1.0)
            mask |= inside
        return mask
    raise TypeError(f"not a polytope spec: {spec!r}")


@dataclass(frozen=True)
class DensityEstimate:
    mean: float
    standard_error: float
    samples: int
    seed: int
    workers: int = 1

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "standard_error": self.standard_error,
            "samples": self.samples,
            "seed": self.seed,
            "workers": self.workers,
        }


def mc_density(
    spec: PolytopeSpec,
    direction: list[int],
    t: Scalar,
    samples: int,
    seed: int,
    workers: int = 1,
) -> DensityEstimate:
    """Estimate the slice density at t by slab counting.

    Deterministic given (seed, samples): workers only partition the sample
    index range, so the estimate is identical for any worker count; the
    count is recorded as provenance.
    """
    if samples < 1000:
        raise InputError("need at least 1000 samples")
    if workers < 1:
        raise InputError("worker count must be positive")
    direction = [int(d) for d in direction]
    t = as_fraction(t)
    box = _bounding_box(spec)
    dim = len(box)
    if len(direction) != dim:
        raise InputError("direction dimension does not match the polytope")

    cells = triangulate(spec)
    hvals = [h for c in cells for h in c.heights(direction)]
    h_lo, h_hi = min(hvals), max(hvals)
    delta = (h_hi - h_lo) / 1000
    if delta == 0:
        raise InputError("degenerate height range")

    lo_f = np.array([float(lo) for lo, _ in box])
    span_f = np.array([float(hi - lo) for lo, hi in box])
    dir_f = np.array([float(d) for d in direction])
    box_volume = math.prod(float(hi - lo) for lo, hi in box)
    t_f, delta_f = float(t), float(delta)

    bounds = [w * samples // workers for w in range(workers + 1)]
    hits = 0
    for w in range(workers):
        count = bounds[w + 1] - bounds[w]
        if count == 0:
            continue
        u = uniforms(seed, bounds[w] * dim, count * dim).reshape(count, dim)
        pts = lo_f + u * span_f
        slab = np.abs(pts @ dir_f - t_f) <= delta_f
        inside = _membership(spec, pts)
        hits += int((slab & inside).sum())

    scale = box_volume / (2.0 * delta_f)
    p_hat = hits / samples
    mean = scale * p_hat
    stderr = scale * math.sqrt(p_hat * (1.0 - p_hat) / (samples - 1))
    return DensityEstimate(
        mean=mean, standard_error=stderr, samples=samples, seed=seed, workers=workers
    )
