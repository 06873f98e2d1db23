"""Scikit-learn style facades over the K-function estimators.

Each estimator takes hyperparameters in ``__init__`` (so ``get_params`` /
``set_params`` and pipeline cloning work), computes its curve in ``fit``,
and exposes the fitted step function through ``predict``.  Data may be
passed as the package's dataset types or as raw arrays plus a ``window``
parameter.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .current_k import KernelSpec, kc
from .errors import InvalidInputError
from .fiber_k import FiberSet, kf_direct, kf_via_cox
from .geometry import Window, as_polyline
from .morph_k import CurveSet, km
from .point_k import LabeledPointSet, ripley_k_points

__all__ = [
    "CurrentKEstimator",
    "FiberKEstimator",
    "MorphKEstimator",
    "RipleysKEstimator",
    "default_radii_grid",
]


def default_radii_grid(window, count=100):
    """100 uniform radii up to the largest radius that keeps the eroded
    window non-empty."""
    r_max = 0.5 * float((window.hi - window.lo).min()) * (1.0 - 1e-9)
    return np.linspace(r_max / count, r_max, count)


def _as_window(window):
    if window is None:
        return None
    if isinstance(window, Window):
        return window
    lo, hi = window
    return Window(lo, hi)


def _need_window(x_window, param_window, what):
    w = x_window if x_window is not None else _as_window(param_window)
    if w is None:
        raise InvalidInputError(f"{what} requires a window (pass data types that carry one, or set window=)")
    return w


class _FittedCurveMixin:
    """predict() evaluates the fitted step curve at query radii."""

    def predict(self, r):
        if not hasattr(self, "curve_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")
        return self.curve_.evaluate(np.asarray(r, dtype=float))

    @property
    def radii_(self):
        return self.curve_.radii

    @property
    def values_(self):
        return self.curve_.values


class RipleysKEstimator(_FittedCurveMixin, BaseEstimator):
    """Sorting-based Ripley K estimator with guard-point semantics.

    fit(X) accepts a :class:`LabeledPointSet` or an (n, d) array of interior
    points (``window`` parameter required in that case, guard empty).
    """

    def __init__(self, window=None):
        self.window = window

    def fit(self, X, y=None):
        if isinstance(X, LabeledPointSet):
            ps = X
        else:
            w = _need_window(None, self.window, "array input")
            ps = LabeledPointSet(interior=np.asarray(X, dtype=float), guard=[], window=w)
        self.curve_ = ripley_k_points(ps)
        return self


def _as_fiber_set(X, window):
    if isinstance(X, FiberSet):
        return X
    if isinstance(X, CurveSet):
        return FiberSet.from_curves(X)
    w = _need_window(None, window, "curve list input")
    return FiberSet(fibers=tuple(as_polyline(c) for c in X), window=w)


def _as_curve_set(X, window):
    if isinstance(X, CurveSet):
        return X
    if isinstance(X, FiberSet):
        return CurveSet(curves=X.fibers, window=X.window)
    w = _need_window(None, window, "curve list input")
    return CurveSet(curves=tuple(as_polyline(c) for c in X), window=w)


class FiberKEstimator(_FittedCurveMixin, BaseEstimator):
    """Fiber-process K estimator: ``method="direct"`` (erosion window) or
    ``method="cox"`` (Poisson points on fibers, rate and seed required)."""

    def __init__(self, method="direct", radii=None, spacing=None, rate=None,
                 seed=None, window=None):
        self.method = method
        self.radii = radii
        self.spacing = spacing
        self.rate = rate
        self.seed = seed
        self.window = window

    def fit(self, X, y=None):
        fs = _as_fiber_set(X, self.window)
        radii = self.radii if self.radii is not None else default_radii_grid(fs.window)
        if self.method == "direct":
            self.curve_ = kf_direct(fs, radii, spacing=self.spacing)
        elif self.method == "cox":
            if self.rate is None or self.seed is None:
                raise InvalidInputError('method="cox" requires rate and seed')
            self.curve_ = kf_via_cox(fs, self.rate, self.seed)
        else:
            raise InvalidInputError(f"unknown method {self.method!r}")
        return self


class MorphKEstimator(_FittedCurveMixin, BaseEstimator):
    """Morphological (dilation-neighborhood) K estimator for curve sets."""

    def __init__(self, radii=None, spacing=None, window=None):
        self.radii = radii
        self.spacing = spacing
        self.window = window

    def fit(self, X, y=None):
        cs = _as_curve_set(X, self.window)
        radii = self.radii if self.radii is not None else default_radii_grid(cs.window)
        self.curve_ = km(cs, radii, spacing=self.spacing)
        return self


class CurrentKEstimator(_FittedCurveMixin, BaseEstimator):
    """Currents-metric K estimator.  ``sigma`` (kernel bandwidth) has no
    default: it sets the scale of structures being compared."""

    def __init__(self, sigma=None, amplitude=1.0, samples=50, window=None):
        self.sigma = sigma
        self.amplitude = amplitude
        self.samples = samples
        self.window = window

    def fit(self, X, y=None):
        if self.sigma is None:
            raise InvalidInputError("sigma is required (no default bandwidth)")
        cs = _as_curve_set(X, self.window)
        kernel = KernelSpec(amplitude=self.amplitude, sigma=self.sigma)
        self.curve_ = kc(cs, kernel, m=self.samples)
        return self
