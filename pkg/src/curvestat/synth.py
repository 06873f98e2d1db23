"""Seeded generators for point patterns and random curve sets.

Point patterns: uniform, mother-child clusters, a regular grid, and a
jittered grid, each emitted over the window enlarged by a guard margin so
rim points can serve as neighbors.

Curve sets: flow lines of the gradient of a random quadratic surface,
integrated with fixed-step RK4 both forward and backward through each start
point.  Start points come from a seed distribution (uniform, or a Gaussian
mixture for clustered presets); every curve consumes an RNG stream keyed by
(seed, curve index) so the set is reproducible and stable under appending
curves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .geometry import Polyline, Window, clipped_length
from .morph_k import CurveSet
from .point_k import LabeledPointSet
from .validation import check_seed

__all__ = [
    "CURVE_PRESETS",
    "QuadraticField",
    "SeedDistribution",
    "gen_curveset",
    "gen_points",
    "gradient_flow_curve",
    "preset_curveset",
]

# One pinned field seed so every cluster preset flows along the same surface.
_FIELD_SEED = 109


@dataclass(frozen=True)
class QuadraticField:
    """Scalar field f(x, y) = a0 + a1 x + a2 y + a3 x^2 + a4 x y + a5 y^2."""

    coefficients: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coefficients, dtype=float)
        if a.shape != (6,) or not np.isfinite(a).all():
            raise InvalidInputError("need 6 finite coefficients")
        if not np.any(a[1:]):
            raise InvalidInputError("field must not be constant")
        object.__setattr__(self, "coefficients", a)

    @classmethod
    def random(cls, seed):
        """Coefficients drawn iid standard normal from the given seed."""
        return cls(np.random.default_rng(check_seed(seed)).standard_normal(6))

    def value(self, p):
        a = self.coefficients
        x, y = p[..., 0], p[..., 1]
        return a[0] + a[1] * x + a[2] * y + a[3] * x**2 + a[4] * x * y + a[5] * y**2

    def gradient(self, p):
        a = self.coefficients
        x, y = p[..., 0], p[..., 1]
        return np.stack(
            [a[1] + 2 * a[3] * x + a[4] * y, a[2] + a[4] * x + 2 * a[5] * y], axis=-1
        )


@dataclass(frozen=True)
class SeedDistribution:
    """Where curves start: uniform over the (enlarged) window, or a Gaussian
    mixture around fixed centers."""

    kind: str = "uniform-in-window"
    centers: np.ndarray | None = None
    spread: float = 0.1

    def __post_init__(self):
        if self.kind not in ("uniform-in-window", "gaussian-mixture"):
            raise InvalidInputError(f"unknown seed distribution kind: {self.kind!r}")
        if self.kind == "gaussian-mixture":
            c = np.atleast_2d(np.asarray(self.centers, dtype=float))
            if len(c) < 1 or c.shape[1] != 2:
                raise InvalidInputError("gaussian-mixture needs at least one 2D center")
            if not self.spread > 0:
                raise InvalidInputError("spread must be positive")
            object.__setattr__(self, "centers", c)

    def draw(self, rng, box):
        if self.kind == "uniform-in-window":
            return rng.uniform(box.lo, box.hi)
        center = self.centers[rng.integers(len(self.centers))]
        return center + rng.normal(0.0, self.spread, size=2)


def gen_points(pattern, window, seed, *, n=None, k=None, sd=None, n_mothers=None,
               children=None, margin=0.5):
    """Generate one of the benchmark point patterns, labeled red/blue.

    uniform:      ``n`` iid points over the window enlarged by ``margin``.
    mother-child: ``n_mothers`` uniform mothers over the enlarged window,
                  each with ``children`` offsets drawn N(0, sd^2 I); only the
                  children are emitted.
    grid:         ``k`` x ``k`` lattice spanning the window exactly.
    noisy-grid:   the lattice plus N(0, sd^2 I) jitter per point.

    Points inside the window are interior, the rest guard.  Deterministic
    per seed.
    """
    rng = np.random.default_rng(check_seed(seed))
    if margin < 0:
        raise InvalidInputError("margin must be non-negative")
    box = window.enlarged(margin) if margin > 0 else window

    if pattern == "uniform":
        if not n or n < 1:
            raise InvalidInputError("uniform pattern needs n >= 1")
        pts = rng.uniform(box.lo, box.hi, size=(int(n), 2))
    elif pattern == "mother-child":
        if not n_mothers or n_mothers < 1 or not children or children < 1:
            raise InvalidInputError("mother-child needs n_mothers >= 1 and children >= 1")
        if sd is None or sd < 0:
            raise InvalidInputError("mother-child needs sd >= 0")
        mothers = rng.uniform(box.lo, box.hi, size=(int(n_mothers), 2))
        offsets = rng.normal(0.0, sd, size=(int(n_mothers), int(children), 2))
        pts = (mothers[:, None, :] + offsets).reshape(-1, 2)
    elif pattern in ("grid", "noisy-grid"):
        if not k or k < 2:
            raise InvalidInputError("grid patterns need k >= 2")
        xs = np.linspace(window.lo[0], window.hi[0], int(k))
        ys = np.linspace(window.lo[1], window.hi[1], int(k))
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        pts = np.c_[gx.ravel(), gy.ravel()]
        if pattern == "noisy-grid":
            if sd is None or sd < 0:
                raise InvalidInputError("noisy-grid needs sd >= 0")
            pts = pts + rng.normal(0.0, sd, size=pts.shape)
    else:
        raise InvalidInputError(f"unknown point pattern: {pattern!r}")

    inside = window.contains(pts)
    return LabeledPointSet(interior=pts[inside], guard=pts[~inside], window=window)


def _rk4_branch(field, start, step, n_steps, bounds, sign, emit_every):
    """Fixed-step RK4 along the unit gradient field (sign -1 for descent).
    Emits every ``emit_every``-th point plus the stopping point; stops on
    the step budget, on leaving ``bounds``, or at a critical point."""

    def direction(p):
        g = field.gradient(p)
        norm = float(np.linalg.norm(g))
        if norm < 1e-8:
            return None
        return (sign / norm) * g

    out = []
    p = np.asarray(start, dtype=float)
    emitted_last = True
    for i in range(n_steps):
        k1 = direction(p)
        if k1 is None:
            break
        k2 = direction(p + (0.5 * step) * k1)
        k3 = direction(p + (0.5 * step) * k2) if k2 is not None else None
        k4 = direction(p + step * k3) if k3 is not None else None
        if k2 is None or k3 is None or k4 is None:
            break
        p = p + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        emitted_last = (i + 1) % emit_every == 0
        if emitted_last:
            out.append(p)
        if not bounds.contains(p[None])[0]:
            break
    if not emitted_last:
        out.append(p)
    return out


def gradient_flow_curve(field, start, step=1e-3, max_len=4.0, bounds=None, emit_every=1):
    """Flow line of the gradient field through ``start``.

    Integrates the unit gradient with fixed-step RK4 forward and backward,
    concatenating both branches so the curve passes through the start point.
    Each branch is capped at ``max_len / 2`` of arc, stops on leaving
    ``bounds``, or at a critical point (gradient norm below 1e-8).
    """
    if step <= 0 or max_len <= 0:
        raise InvalidInputError("step and max_len must be positive")
    start = np.asarray(start, dtype=float)
    if bounds is None:
        bounds = Window(start - 2 * max_len, start + 2 * max_len)
    n_steps = max(1, int(round(0.5 * max_len / step)))
    fwd = _rk4_branch(field, start, step, n_steps, bounds, +1.0, emit_every)
    bwd = _rk4_branch(field, start, step, n_steps, bounds, -1.0, emit_every)
    verts = bwd[::-1] + [start] + fwd
    verts = _drop_duplicate_neighbors(np.asarray(verts))
    if len(verts) < 2:
        raise InvalidInputError("start point sits on a critical point of the field")
    return Polyline(verts)


def _drop_duplicate_neighbors(verts):
    if len(verts) < 2:
        return verts
    keep = np.r_[True, np.linalg.norm(np.diff(verts, axis=0), axis=1) > 0]
    return verts[keep]


def gen_curveset(field, seeds, n_curves, window, seed, *, step=1e-3, max_len=4.0,
                 margin=0.5, emit_every=1, retry_cap=50):
    """Draw start points and flow a curve through each, keeping curves that
    intersect the window.

    Curve i draws starts from the RNG stream (seed, i + 1), retrying up to
    ``retry_cap`` times when the flow line misses the window or starts on a
    critical point.  Curves live on the window enlarged by ``margin``.
    """
    if n_curves < 1:
        raise InvalidInputError("n_curves must be at least 1")
    seed = check_seed(seed)
    box = window.enlarged(margin) if margin > 0 else window
    curves = []
    for i in range(int(n_curves)):
        rng = np.random.default_rng([seed, i + 1])
        for _ in range(retry_cap):
            start = seeds.draw(rng, box)
            if not box.contains(start[None])[0]:
                continue
            try:
                curve = gradient_flow_curve(
                    field, start, step=step, max_len=max_len, bounds=box,
                    emit_every=emit_every,
                )
            except InvalidInputError:
                continue
            if clipped_length(curve, window) > 0:
                curves.append(curve)
                break
        else:
            raise InvalidInputError(
                f"curve {i}: no window-intersecting flow line in {retry_cap} tries"
            )
    return CurveSet(curves=tuple(curves), window=window)


CURVE_PRESETS = {
    "wide": None,
    "7cluster": (7, 0.1),
    "2cluster": (2, 0.1),
    "1cluster": (1, 0.05),
}


def preset_curveset(preset, n_curves=30, seed=0, window=None, *, step=1e-3,
                    max_len=4.0, margin=0.5, emit_every=20, field_seed=_FIELD_SEED):
    """Benchmark curve sets: one shared random surface, start distributions
    ranging from uniform ("wide") to 7, 2, or 1 Gaussian clusters.

    Mixture centers are drawn once per seed, uniformly inside the window;
    spreads are preset-specific (narrow for the single cluster).
    """
    if preset not in CURVE_PRESETS:
        raise InvalidInputError(f"unknown preset {preset!r}; pick from {sorted(CURVE_PRESETS)}")
    window = window or Window((-1.0, -1.0), (1.0, 1.0))
    field = QuadraticField.random(field_seed)
    spec = CURVE_PRESETS[preset]
    if spec is None:
        seeds = SeedDistribution(kind="uniform-in-window")
    else:
        n_centers, spread = spec
        rng = np.random.default_rng([check_seed(seed), 0])
        centers = rng.uniform(window.lo, window.hi, size=(n_centers, 2))
        seeds = SeedDistribution(kind="gaussian-mixture", centers=centers, spread=spread)
    return gen_curveset(
        field, seeds, n_curves, window, seed,
        step=step, max_len=max_len, margin=margin, emit_every=emit_every,
    )
