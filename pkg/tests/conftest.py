import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_polyline(rng, n_vertices=6, scale=1.0, dim=2):
    """Random polyline with distinct consecutive vertices."""
    steps = rng.normal(size=(n_vertices - 1, dim))
    norms = np.linalg.norm(steps, axis=1, keepdims=True)
    steps = steps / np.maximum(norms, 1e-9) * rng.uniform(0.2, 1.0, size=(n_vertices - 1, 1))
    verts = np.vstack([rng.uniform(-1, 1, size=dim), steps]).cumsum(axis=0) * scale
    return verts


def rotation_2d(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])
