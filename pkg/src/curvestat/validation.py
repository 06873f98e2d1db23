"""Input-validation helpers shared by estimators and the CLI."""

import numpy as np

from .errors import InvalidInputError


def check_radii(radii):
    """Coerce to a strictly increasing 1D array of non-negative floats."""
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if r.ndim != 1 or len(r) == 0:
        raise InvalidInputError("radii must be a non-empty 1D sequence")
    if not np.isfinite(r).all() or (r < 0).any():
        raise InvalidInputError("radii must be finite and non-negative")
    if (np.diff(r) <= 0).any():
        raise InvalidInputError("radii must be strictly increasing")
    return r


def check_seed(seed):
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise InvalidInputError("seed must be a non-negative integer")
    return int(seed)


def check_positive(value, name):
    if not np.isfinite(value) or value <= 0:
        raise InvalidInputError(f"{name} must be positive and finite")
    return float(value)
