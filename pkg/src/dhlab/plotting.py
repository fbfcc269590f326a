"""Figure rendering for density reports.

Renders the density and its logarithm as two stacked panels with dots at the
critical levels, written to SVG (or any format matplotlib infers from the
file suffix).  Uses the object-oriented matplotlib API so no interactive
backend is ever touched.
"""

from __future__ import annotations

import math
import os
import tempfile
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .polynomial import PiecewisePoly


def _piece_samples(f: PiecewisePoly, per_piece: int = 64):
    """Float samples piece by piece so jump discontinuities stay crisp."""
    for lo, hi, poly in zip(f.breakpoints, f.breakpoints[1:], f.pieces):
        xs = np.linspace(float(lo), float(hi), per_piece)
        coeffs = [float(c) for c in poly.coeffs] or [0.0]
        ys = np.polynomial.polynomial.polyval(xs, coeffs)
        yield xs, ys


def render_density_figure(f: PiecewisePoly, path: str | Path, title: str = "DH density") -> None:
    fig = Figure(figsize=(7.0, 7.5))
    ax_dh, ax_log = fig.subplots(2, 1, sharex=True)

    for xs, ys in _piece_samples(f):
        ax_dh.plot(xs, ys, color="tab:blue", linewidth=1.6)
        mask = ys > 0
        if mask.any():
            ax_log.plot(xs[mask], np.log(ys[mask]), color="tab:orange", linewidth=1.6)

    bx = [float(c) for c in f.breakpoints]
    by = [float(f(c)) for c in f.breakpoints]
    ax_dh.plot(bx, by, "k.", markersize=6)
    for c, v in zip(bx, by):
        if v > 0:
            ax_log.plot([c], [math.log(v)], "k.", markersize=6)

    ax_dh.set_ylabel("DH(t)")
    ax_dh.set_title(title)
    ax_log.set_ylabel("log DH(t)")
    ax_log.set_xlabel("t")
    for ax in (ax_dh, ax_log):
        ax.set_xticks(bx)
        ax.grid(True, alpha=0.25)
    fig.tight_layout()

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=path.suffix
    )
    os.close(fd)
    try:
        fig.savefig(tmp, format=path.suffix.lstrip(".") or "svg")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
