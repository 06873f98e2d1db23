"""Morphological K-function for curve sets.

Each curve's r-neighborhood is its dilation by a closed ball of radius r,
kept exact through point-to-segment distances rather than any raster
approximation.  For every ordered pair (center curve j, other curve i) the
estimator integrates the arc length of i lying inside the window and inside
j's dilation, normalizes per center by i's window length, and averages over
centers with the intensity estimate.

The integration samples each window-clipped curve once at a fixed arc
spacing and records its distance profile to every other curve; per radius,
membership runs are then summed with boundary crossings placed by linear
interpolation of the distance profile (error O(spacing^2), far below the
quadrature tolerances used here).  Excursions into or out of a dilation
shorter than the sample spacing are not seen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .geometry import Window, as_polyline, clip_to_window, points_to_polyline_distance
from .point_k import EstimateCurve
from .utils import parallel_map
from .validation import check_radii

__all__ = ["CurveSet", "dilation_membership", "km"]


@dataclass(frozen=True, eq=False)
class CurveSet:
    """Curves observed through a box window.

    Curves are free to extend beyond the window; only their clipped parts
    enter intersection lengths, while dilations use the full extent.
    """

    curves: tuple
    window: Window

    def __post_init__(self):
        curves = tuple(as_polyline(c) for c in self.curves)
        if curves and len({c.dim for c in curves} | {self.window.dim}) != 1:
            raise InvalidInputError("curves and window must share one dimension")
        object.__setattr__(self, "curves", curves)

    def __len__(self):
        return len(self.curves)


def dilation_membership(c, r):
    """Membership predicate of the curve's r-neighborhood (closed dilation):
    points at distance exactly r belong."""
    if r < 0:
        raise InvalidInputError("dilation radius must be non-negative")
    c = as_polyline(c)

    def member(points):
        return points_to_polyline_distance(points, c) <= r

    return member


def _eval_arcs(piece, spacing):
    """Arc positions probing a piece: both endpoints plus cell midpoints."""
    m = max(1, math.ceil(piece.length / spacing))
    mids = (np.arange(m) + 0.5) * (piece.length / m)
    return np.concatenate([[0.0], mids, [piece.length]])


def _inside_length(arcs, dists, r):
    """Length of the piece where the distance profile is <= r, crossings
    placed by linear interpolation between probe points."""
    member = dists <= r
    if member.all():
        return float(arcs[-1] - arcs[0])
    if not member.any():
        return 0.0
    flips = np.flatnonzero(member[:-1] != member[1:])
    frac = (r - dists[flips]) / (dists[flips + 1] - dists[flips])
    crossings = arcs[flips] + frac * (arcs[flips + 1] - arcs[flips])
    bounds = np.concatenate([arcs[:1], crossings, arcs[-1:]])
    runs = np.diff(bounds)
    keep = (np.arange(len(runs)) % 2 == 0) == member[0]
    return float(runs[keep].sum())


def km(cs, radii, spacing=None):
    """Morphological K-function on a radii grid.

    For each radius r,
    ``K(r) = (1 / (n rho)) sum_j (1 / len_j) sum_{i != j} intlen_ij(r)``
    where ``len_j`` is curve j's window-clipped length, ``intlen_ij(r)`` the
    length of curve i inside the window and within distance r of curve j,
    and ``rho`` the window length intensity.  Curves with zero window length
    are skipped as centers (flagged in ``meta["skipped_curves"]``) and ``n``
    counts the remaining centers.
    """
    radii = check_radii(radii)
    curves, window = cs.curves, cs.window
    if len(curves) < 2:
        raise InvalidInputError("need at least two curves")

    pieces = [clip_to_window(c, window) for c in curves]
    lengths = np.array([sum(p.length for p in ps) for ps in pieces])
    total = lengths.sum()
    if total <= 0:
        raise InvalidInputError("no curve has length inside the window")
    rho = total / window.volume
    centers = [j for j in range(len(curves)) if lengths[j] > 0]

    if spacing is None:
        r_pos = radii[radii > 0]
        spacing = min(0.01 * total, (r_pos[0] / 5.0) if len(r_pos) else np.inf, 0.01)

    # Probe arcs (and their points) per curve, shared across all centers.
    probes = []
    for ps in pieces:
        arcs = [_eval_arcs(p, spacing) for p in ps]
        probes.append([(a, p.point_at(a)) for a, p in zip(arcs, ps)])

    # Distance profiles once per ordered pair; radii reuse them.
    tasks = [(i, j) for j in centers for i in range(len(curves)) if i != j and lengths[i] > 0]

    def profile(pair):
        i, j = pair
        return [points_to_polyline_distance(pts, curves[j]) for _, pts in probes[i]]

    profiles = dict(zip(tasks, parallel_map(profile, tasks)))

    values = []
    for r in radii:
        acc = 0.0
        for j in centers:
            inner = 0.0
            for i in range(len(curves)):
                if i == j or lengths[i] == 0:
                    continue
                dists = profiles[(i, j)]
                inner += sum(
                    _inside_length(arcs, d, r)
                    for (arcs, _), d in zip(probes[i], dists)
                )
            acc += inner / lengths[j]
        values.append(acc / (len(centers) * rho))

    meta = {"rho": rho, "spacing": spacing, "estimator": "km"}
    skipped = [j for j in range(len(curves)) if lengths[j] == 0]
    if skipped:
        meta["skipped_curves"] = skipped
    return EstimateCurve(radii=radii, values=np.array(values), meta=meta)
