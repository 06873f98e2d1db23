"""Geometric primitives shared by every estimator.

Curves are oriented polylines (ordered vertex arrays), observation windows
are axis-aligned boxes, and curve integrals reduce to weighted sums over
arc-length samples.  All operations are pure functions of immutable values,
exact on piecewise-linear inputs wherever the region involved is a box or a
ball, and quadrature-based otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyErosionError, InvalidInputError

__all__ = [
    "ArcSamples",
    "Polyline",
    "Window",
    "as_polyline",
    "ball_intersection_length",
    "clip_to_window",
    "clipped_length",
    "erode_window",
    "intersection_length",
    "point_to_polyline_distance",
    "points_to_polyline_distance",
    "polyline_length",
    "resample_by_arclength",
]

# Element budget per vectorized distance/clipping block; keeps peak memory
# for (points x segments) broadcasts around a few hundred MB.
_CHUNK_ELEMS = 4_000_000


def _as_coords(obj, name):
    arr = np.asarray(obj, dtype=float)
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class Window:
    """Axis-aligned box observation region with positive volume."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = _as_coords(self.lo, "window corners")
        hi = _as_coords(self.hi, "window corners")
        if lo.ndim != 1 or lo.shape != hi.shape or lo.size not in (2, 3):
            raise InvalidInputError("window corners must be matching 2- or 3-vectors")
        if not (lo < hi).all():
            raise InvalidInputError("window needs lo < hi on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        lo.setflags(write=False)
        hi.setflags(write=False)

    @property
    def dim(self):
        return self.lo.size

    @property
    def volume(self):
        return float(np.prod(self.hi - self.lo))

    def contains(self, points):
        """Closed-box membership for an (m, d) array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return ((pts >= self.lo) & (pts <= self.hi)).all(axis=1)

    def enlarged(self, margin):
        if margin < 0:
            raise InvalidInputError("margin must be non-negative")
        return Window(self.lo - margin, self.hi + margin)

    def diameter(self):
        return float(np.linalg.norm(self.hi - self.lo))


class Polyline:
    """Oriented curve approximated by an ordered vertex sequence.

    Vertices form an (n, d) float array with n >= 2 and d in {2, 3};
    consecutive vertices must be distinct so every segment has positive
    length.  Instances are immutable and safe to share between threads.
    """

    __slots__ = ("vertices", "seg_vectors", "seg_lengths", "cum_lengths")

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2:
            raise InvalidInputError("a polyline needs at least 2 vertices")
        if v.shape[1] not in (2, 3):
            raise InvalidInputError("only 2D and 3D polylines are supported")
        if not np.isfinite(v).all():
            raise InvalidInputError("polyline vertices must be finite")
        seg = np.diff(v, axis=0)
        lens = np.linalg.norm(seg, axis=1)
        if not (lens > 0.0).all():
            raise InvalidInputError("consecutive polyline vertices must be distinct")
        for a in (v, seg, lens):
            a.setflags(write=False)
        self.vertices = v
        self.seg_vectors = seg
        self.seg_lengths = lens
        cum = np.concatenate([[0.0], np.cumsum(lens)])
        cum.setflags(write=False)
        self.cum_lengths = cum

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def n_segments(self):
        return len(self.seg_lengths)

    @property
    def length(self):
        return float(self.cum_lengths[-1])

    def segment_of(self, arc):
        """Index of the segment containing each arc position (right-continuous
        at interior vertices, clamped at the ends)."""
        s = np.asarray(arc, dtype=float)
        idx = np.searchsorted(self.cum_lengths, s, side="right") - 1
        return np.clip(idx, 0, self.n_segments - 1)

    def point_at(self, arc):
        """Point(s) at the given arc-length position(s) in [0, length]."""
        s = np.asarray(arc, dtype=float)
        k = self.segment_of(s)
        t = (s - self.cum_lengths[k]) / self.seg_lengths[k]
        return self.vertices[k] + t[..., None] * self.seg_vectors[k]

    def reversed(self):
        return Polyline(self.vertices[::-1])

    def __repr__(self):
        return f"Polyline({len(self.vertices)} vertices, length={self.length:.6g})"


def as_polyline(obj):
    return obj if isinstance(obj, Polyline) else Polyline(obj)


@dataclass(frozen=True, eq=False)
class ArcSamples:
    """Midpoint quadrature rule over a polyline's arc length.

    ``points[i]`` sits at the arc midpoint of the i-th equal-length cell,
    ``tangents[i]`` is the unit direction of the polyline segment containing
    that midpoint, and ``weights[i]`` is the cell's arc length.  Weights sum
    to the polyline length.
    """

    points: np.ndarray
    tangents: np.ndarray
    weights: np.ndarray
    arcs: np.ndarray = field(repr=False, default=None)

    def __len__(self):
        return len(self.weights)


def polyline_length(c):
    """Total Euclidean length of a polyline (sum of segment lengths)."""
    return as_polyline(c).length


def resample_by_arclength(c, m):
    """Split a polyline into ``m`` equal-arc-length cells, sampled at cell
    midpoints.

    Returns an :class:`ArcSamples` whose weights are all ``length / m``.
    """
    c = as_polyline(c)
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidInputError("sample count m must be a positive integer")
    length = c.length
    mids = (np.arange(m) + 0.5) * (length / m)
    k = c.segment_of(mids)
    tangents = c.seg_vectors[k] / c.seg_lengths[k, None]
    weights = np.full(m, length / m)
    return ArcSamples(points=c.point_at(mids), tangents=tangents, weights=weights, arcs=mids)


def erode_window(w, r):
    """Shrink a window by ``r`` on every side.

    Raises :class:`EmptyErosionError` when 2r meets or exceeds a side length.
    """
    if r < 0:
        raise InvalidInputError("erosion radius must be non-negative")
    lo, hi = w.lo + r, w.hi - r
    if not (lo < hi).all():
        raise EmptyErosionError(f"erosion by r={r} empties the window")
    return Window(lo, hi)


def _segment_window_interval(a, u, w):
    """Parameter range [t0, t1] of a + t*u (t in [0, 1]) inside the closed
    box ``w``, via slab clipping.  Returns t1 <= t0 when there is no overlap."""
    t0, t1 = 0.0, 1.0
    for k in range(w.dim):
        if u[k] == 0.0:
            if a[k] < w.lo[k] or a[k] > w.hi[k]:
                return 1.0, 0.0
            continue
        ta = (w.lo[k] - a[k]) / u[k]
        tb = (w.hi[k] - a[k]) / u[k]
        if ta > tb:
            ta, tb = tb, ta
        t0 = max(t0, ta)
        t1 = min(t1, tb)
        if t1 < t0:
            return 1.0, 0.0
    return t0, t1


def clip_to_window(c, w):
    """Maximal sub-polylines of ``c`` inside the closed box ``w``.

    Segments crossing the boundary are split at the exact box-intersection
    points; vertex order and orientation are preserved.  Returns an empty
    list when the curve misses the window.
    """
    c = as_polyline(c)
    pieces = []
    current = []
    prev_exit_inside = False
    for a, u in zip(c.vertices[:-1], c.seg_vectors):
        t0, t1 = _segment_window_interval(a, u, w)
        if t1 <= t0:
            if len(current) >= 2:
                pieces.append(Polyline(current))
            current = []
            prev_exit_inside = False
            continue
        p0 = a + t0 * u
        p1 = a + t1 * u
        connected = prev_exit_inside and t0 == 0.0
        if not connected:
            if len(current) >= 2:
                pieces.append(Polyline(current))
            current = [p0]
        if np.any(p1 != current[-1]):
            current.append(p1)
        prev_exit_inside = t1 == 1.0
    if len(current) >= 2:
        pieces.append(Polyline(current))
    return pieces


def clipped_length(c, w):
    """Exact arc length of ``c`` inside the box ``w``."""
    return float(sum(p.length for p in clip_to_window(c, w)))


def intersection_length(c, region, eps=None, coarse=None):
    """Arc length of the part of ``c`` lying inside ``region``.

    ``region`` is a membership predicate taking an (m, d) array of points and
    returning (m,) booleans.  Segments are first cut into spans no longer
    than ``coarse`` (default length / 1024); spans whose endpoints and
    midpoint agree in membership are classified wholesale, and disagreeing
    spans are bisected until shorter than ``eps`` (default 1e-6 times the
    polyline length), then resolved by their midpoint.  Excursions across the
    region boundary and back within a single pure-looking span are missed,
    which is the usual quadrature caveat; shrink ``coarse`` to resolve finer
    features.
    """
    c = as_polyline(c)
    if eps is None:
        eps = 1e-6 * c.length
    if coarse is None:
        coarse = c.length / 1024.0
    pieces = np.maximum(1, np.ceil(c.seg_lengths / max(coarse, 1e-300)).astype(int))
    reps = np.repeat(np.arange(c.n_segments), pieces)
    frac = np.concatenate([np.arange(k) / k for k in pieces])
    inv = np.repeat(1.0 / pieces, pieces)
    starts = c.vertices[:-1][reps] + frac[:, None] * c.seg_vectors[reps]
    vecs = c.seg_vectors[reps] * inv[:, None]
    lens = c.seg_lengths[reps] * inv
    total = 0.0
    while len(starts):
        mids = starts + 0.5 * vecs
        m_lo = np.asarray(region(starts), dtype=bool)
        m_mid = np.asarray(region(mids), dtype=bool)
        m_hi = np.asarray(region(starts + vecs), dtype=bool)
        uniform = (m_lo == m_mid) & (m_mid == m_hi)
        small = ~uniform & (lens < eps)
        total += float(lens[uniform & m_mid].sum() + lens[small & m_mid].sum())
        split = ~uniform & ~small
        if not split.any():
            break
        half = 0.5 * vecs[split]
        starts = np.concatenate([starts[split], starts[split] + half])
        vecs = np.concatenate([half, half])
        lens = np.concatenate([0.5 * lens[split]] * 2)
    return total


def points_to_polyline_distance(points, c):
    """Minimum distance from each of (m, d) ``points`` to polyline ``c``.

    Exact point-to-segment distances, minimized over segments.  Work is
    chunked so the (points x segments) broadcast stays within a fixed memory
    budget.
    """
    c = as_polyline(c)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    starts = c.vertices[:-1]
    vecs = c.seg_vectors
    inv_len2 = 1.0 / (c.seg_lengths**2)
    n_seg = c.n_segments
    out = np.empty(len(pts))
    step = max(1, _CHUNK_ELEMS // max(1, n_seg))
    for i in range(0, len(pts), step):
        p = pts[i : i + step]
        diff = p[:, None, :] - starts[None, :, :]
        t = np.einsum("mnd,nd->mn", diff, vecs) * inv_len2
        np.clip(t, 0.0, 1.0, out=t)
        proj = diff - t[:, :, None] * vecs[None, :, :]
        d2 = np.einsum("mnd,mnd->mn", proj, proj)
        out[i : i + step] = np.sqrt(d2.min(axis=1))
    return out


def point_to_polyline_distance(p, c):
    """Exact minimum distance from a single point to a polyline."""
    return float(points_to_polyline_distance(np.asarray(p, dtype=float)[None, :], c)[0])


def segment_ball_lengths(starts, vecs, lens, centers, r):
    """Total length of a bag of segments inside the closed ball of radius
    ``r`` around each center, via the per-segment crossing quadratic."""
    ctr = np.atleast_2d(np.asarray(centers, dtype=float))
    len2 = lens**2
    out = np.zeros(len(ctr))
    step = max(1, _CHUNK_ELEMS // max(1, len(lens)))
    for i in range(0, len(ctr), step):
        u = ctr[i : i + step]
        diff = starts[None, :, :] - u[:, None, :]
        b = np.einsum("mnd,nd->mn", diff, vecs)
        ca = np.einsum("mnd,mnd->mn", diff, diff) - r * r
        disc = b * b - len2[None, :] * ca
        np.maximum(disc, 0.0, out=disc)
        root = np.sqrt(disc)
        t0 = np.clip((-b - root) / len2[None, :], 0.0, 1.0)
        t1 = np.clip((-b + root) / len2[None, :], 0.0, 1.0)
        out[i : i + step] = ((t1 - t0) * lens[None, :]).sum(axis=1)
    return out


def ball_intersection_length(c, centers, r):
    """Exact arc length of ``c`` inside the closed ball of radius ``r``
    around each center.

    Solves the segment/ball crossing quadratic per (center, segment) pair,
    so the result is exact up to float roundoff.  Returns an (m,) array for
    (m, d) ``centers``.
    """
    if r < 0:
        raise InvalidInputError("ball radius must be non-negative")
    c = as_polyline(c)
    return segment_ball_lengths(c.vertices[:-1], c.seg_vectors, c.seg_lengths, centers, r)
