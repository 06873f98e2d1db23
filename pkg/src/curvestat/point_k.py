"""Ripley's K-function for point sets via the sorting estimator.

The estimator counts ordered pairs closer than each radius, which after
sorting all pair distances collapses to "K at the k-th smallest distance is
k" (deduplicated on ties).  Interior ("red") points drive the estimate;
guard ("blue") points outside the window are counted only as neighbors,
which sidesteps boundary artifacts without a formal edge correction.

Normalization: with n interior points in a window of volume |W| and the
intensity estimate n/|W|, the cumulative ordered-pair count k maps to
K = k * |W| / n^2.  A guard-free pattern therefore saturates at
|W| (n-1)/n once every pair is within range.  Raw counts are kept on the
result so any other normalization can be recovered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EstimationError, InvalidInputError
from .geometry import Window

__all__ = [
    "EstimateCurve",
    "LabeledPointSet",
    "csr_reference",
    "ripley_k_generic",
    "ripley_k_points",
]

# Row block for pairwise-distance accumulation; bounds peak memory.
_ROW_CHUNK = 512


@dataclass(frozen=True, eq=False)
class EstimateCurve:
    """A K-function estimate: right-continuous step samples r -> value.

    ``radii`` are strictly increasing; ``values`` are the estimate at each
    radius, with an implicit (0, 0) before the first sample.  Count-based
    estimators also carry the raw cumulative ordered-pair ``counts``.
    ``meta`` holds estimator annotations (normalization, warnings).
    """

    radii: np.ndarray
    values: np.ndarray
    counts: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape:
            raise InvalidInputError("radii and values must be 1D arrays of equal length")
        if len(r) and (np.diff(r) <= 0).any():
            raise InvalidInputError("radii must be strictly increasing")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.radii)

    def evaluate(self, r):
        """Step-function value at each query radius (0 below the first step)."""
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(self.radii, r, side="right") - 1
        vals = np.where(idx >= 0, self.values[np.maximum(idx, 0)], 0.0)
        return vals if vals.ndim else float(vals)


@dataclass(frozen=True, eq=False)
class LabeledPointSet:
    """Points split into window interior ("red") and guard ("blue") sets.

    Guard points lie outside the window and act only as neighbors in pair
    counts; they never contribute to the intensity estimate.
    """

    interior: np.ndarray
    guard: np.ndarray
    window: Window

    def __post_init__(self):
        d = self.window.dim
        interior = _coerce_points(self.interior, d, "interior")
        guard = _coerce_points(self.guard, d, "guard")
        if len(interior) and not self.window.contains(interior).all():
            raise InvalidInputError("interior points must lie inside the window")
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "guard", guard)

    @property
    def dim(self):
        return self.window.dim

    @property
    def n_interior(self):
        return len(self.interior)

    @property
    def n_guard(self):
        return len(self.guard)


def _coerce_points(points, dim, name):
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        arr = np.empty((0, dim))
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise InvalidInputError(f"{name} points must form an (n, {dim}) array")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} points must be finite")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def csr_reference(r, dim=2):
    """Volume of the d-ball of radius r: the K-function under complete
    spatial randomness (pi r^2 in 2D, 4/3 pi r^3 in 3D)."""
    r = np.asarray(r, dtype=float)
    if (r < 0).any():
        raise InvalidInputError("radius must be non-negative")
    if dim == 2:
        out = math.pi * r**2
    elif dim == 3:
        out = (4.0 / 3.0) * math.pi * r**3
    else:
        raise InvalidInputError("dimension must be 2 or 3")
    return out if out.ndim else float(out)


def sorted_pair_curve(distances, norm, meta=None):
    """Turn ordered-pair distances into the sorting-estimator step curve.

    Sorts ascending, assigns the cumulative count k to the k-th distance and
    collapses exactly-equal radii keeping the largest count.  ``norm`` scales
    counts into estimate values.
    """
    d = np.sort(np.asarray(distances, dtype=float))
    if len(d) == 0:
        raise EstimationError("no ordered pairs to sort")
    keep = np.r_[d[1:] != d[:-1], True]
    radii = d[keep]
    counts = np.flatnonzero(keep) + 1
    curve_meta = {"norm": norm}
    if meta:
        curve_meta.update(meta)
    return EstimateCurve(radii=radii, values=counts * norm, counts=counts, meta=curve_meta)


def _ordered_pair_distances(interior, targets):
    """Distances of ordered pairs (i over interior, j over targets, j != i),
    where targets is interior stacked before any guard points."""
    n = len(interior)
    rows = []
    for i in range(0, n, _ROW_CHUNK):
        block = interior[i : i + _ROW_CHUNK]
        diff = block[:, None, :] - targets[None, :, :]
        dist = np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))
        cols = np.ones(dist.shape, dtype=bool)
        cols[np.arange(len(block)), np.arange(i, i + len(block))] = False
        rows.append(dist[cols])
    return np.concatenate(rows)


def ripley_k_points(ps):
    """Sorting estimator of Ripley's K-function for a labeled point set.

    Pair distances run i over interior and j over interior plus guard,
    j != i.  Values are cumulative counts times |W| / n_interior^2.
    """
    n = ps.n_interior
    if n == 0:
        raise InvalidInputError("estimation needs at least one interior point")
    if n == 1 and ps.n_guard == 0:
        raise EstimationError("a single interior point admits no pairs")
    targets = np.vstack([ps.interior, ps.guard])
    d = _ordered_pair_distances(ps.interior, targets)
    norm = ps.window.volume / (n * n)
    return sorted_pair_curve(
        d, norm, meta={"n_interior": n, "n_guard": ps.n_guard, "window_volume": ps.window.volume}
    )


def ripley_k_generic(items, dist, norm, symmetric=True):
    """Sorting estimator over arbitrary entities and a pairwise distance.

    ``dist(a, b)`` is evaluated once per unordered pair when ``symmetric``
    (each distance then counts for both ordered pairs), or for every ordered
    pair otherwise.  Values are cumulative ordered-pair counts times
    ``norm``.
    """
    items = list(items)
    n = len(items)
    if n < 2:
        raise InvalidInputError("need at least two items")
    if symmetric:
        d = np.empty(n * (n - 1) // 2)
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                d[k] = dist(items[i], items[j])
                k += 1
        d = np.repeat(d, 2)
    else:
        d = np.empty(n * (n - 1))
        k = 0
        for i in range(n):
            for j in range(n):
                if i != j:
                    d[k] = dist(items[i], items[j])
                    k += 1
    return sorted_pair_curve(d, norm, meta={"n_items": n})
