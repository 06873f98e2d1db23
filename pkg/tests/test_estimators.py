import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from curvestat import (
    CurrentKEstimator,
    CurveSet,
    FiberKEstimator,
    InvalidInputError,
    MorphKEstimator,
    RipleysKEstimator,
    Window,
    kf_direct,
    km,
    ripley_k_points,
)
from curvestat.fiber_k import FiberSet
from curvestat.point_k import LabeledPointSet

W = Window((-1, -1), (1, 1))
CURVES = [[(-0.5, 0.0), (0.5, 0.0)], [(-0.5, 0.2), (0.5, 0.2)]]


class TestRipleysKEstimator:
    def test_matches_function_api(self, rng):
        pts = rng.uniform(-1, 1, size=(30, 2))
        est = RipleysKEstimator(window=((-1, -1), (1, 1))).fit(pts)
        direct = ripley_k_points(LabeledPointSet(interior=pts, guard=[], window=W))
        np.testing.assert_array_equal(est.radii_, direct.radii)
        np.testing.assert_array_equal(est.values_, direct.values)
        np.testing.assert_array_equal(est.predict([0.5, 1.0]), direct.evaluate([0.5, 1.0]))

    def test_accepts_labeled_point_set(self, rng):
        pts = rng.uniform(-1, 1, size=(10, 2))
        ps = LabeledPointSet(interior=pts, guard=[(2.0, 0.0)], window=W)
        est = RipleysKEstimator().fit(ps)
        assert est.curve_.meta["n_guard"] == 1

    def test_array_without_window_rejected(self, rng):
        with pytest.raises(InvalidInputError):
            RipleysKEstimator().fit(rng.uniform(size=(5, 2)))

    def test_predict_before_fit(self):
        with pytest.raises(NotFittedError):
            RipleysKEstimator(window=((-1, -1), (1, 1))).predict([0.1])

    def test_get_params_and_clone(self):
        est = RipleysKEstimator(window=((-1, -1), (1, 1)))
        assert "window" in est.get_params()
        clone(est)  # sklearn clone honors the init contract


class TestFiberKEstimator:
    def test_direct_matches_function(self):
        fs = FiberSet(fibers=CURVES, window=W)
        radii = np.array([0.1, 0.3])
        est = FiberKEstimator(radii=radii).fit(fs)
        np.testing.assert_array_equal(est.values_, kf_direct(fs, radii).values)

    def test_cox_requires_rate_and_seed(self):
        fs = FiberSet(fibers=CURVES, window=W)
        with pytest.raises(InvalidInputError):
            FiberKEstimator(method="cox").fit(fs)

    def test_cox_deterministic(self):
        fs = FiberSet(fibers=CURVES, window=W)
        a = FiberKEstimator(method="cox", rate=300.0, seed=1).fit(fs)
        b = FiberKEstimator(method="cox", rate=300.0, seed=1).fit(fs)
        np.testing.assert_array_equal(a.values_, b.values_)

    def test_curve_list_needs_window(self):
        with pytest.raises(InvalidInputError):
            FiberKEstimator(radii=[0.2]).fit(CURVES)  # no window anywhere
        est = FiberKEstimator(radii=[0.2], window=((-1, -1), (1, 1))).fit(CURVES)
        assert len(est.values_) == 1

    def test_default_radii_grid_used(self):
        fs = FiberSet(fibers=CURVES, window=W)
        est = FiberKEstimator().fit(fs)
        assert len(est.radii_) == 100
        assert est.radii_[-1] < 1.0  # half the window side


class TestMorphKEstimator:
    def test_matches_function(self):
        cs = CurveSet(curves=CURVES, window=W)
        radii = np.array([0.1, 0.2, 0.5])
        est = MorphKEstimator(radii=radii).fit(cs)
        np.testing.assert_array_equal(est.values_, km(cs, radii).values)

    def test_accepts_list_plus_window(self):
        est = MorphKEstimator(radii=[0.3], window=((-1, -1), (1, 1))).fit(CURVES)
        assert est.values_[0] > 0


class TestCurrentKEstimator:
    def test_sigma_required(self):
        cs = CurveSet(curves=CURVES, window=W)
        with pytest.raises(InvalidInputError):
            CurrentKEstimator().fit(cs)

    def test_cdf_output(self):
        cs = CurveSet(curves=CURVES, window=W)
        est = CurrentKEstimator(sigma=0.5).fit(cs)
        assert est.values_[-1] == pytest.approx(1.0)
        assert est.predict([est.radii_[-1] + 1.0]) == pytest.approx(1.0)
