import numpy as np
import pytest
from scipy import stats

from curvestat import CoxSampleError, InvalidInputError, Polyline, Window
from curvestat.fiber_k import (
    FiberSet,
    cox_sample,
    estimate_rho,
    kf_direct,
    kf_via_cox,
    pair_association,
)


def horizontal(y, x0, x1):
    return Polyline([(x0, y), (x1, y)])


class TestEstimateRho:
    def test_unit_segment_unit_window(self):
        fs = FiberSet(fibers=[horizontal(0.5, 0, 1)], window=Window((0, 0), (1, 1)))
        assert estimate_rho(fs) == pytest.approx(1.0)

    def test_two_segments_big_window(self):
        w = Window((-1, -1), (1, 1))
        fs = FiberSet(fibers=[horizontal(0.5, -0.5, 0.5), horizontal(-0.5, -0.5, 0.5)], window=w)
        assert estimate_rho(fs) == pytest.approx(0.5)

    def test_half_inside_counts_clipped_part(self):
        fs = FiberSet(fibers=[horizontal(0.5, -1, 1)], window=Window((0, 0), (1, 1)))
        assert estimate_rho(fs) == pytest.approx(1.0)

    def test_no_length_inside(self):
        fs = FiberSet(fibers=[horizontal(5.0, 0, 1)], window=Window((0, 0), (1, 1)))
        with pytest.raises(InvalidInputError):
            estimate_rho(fs)


class TestKfDirect:
    def test_single_fiber_closed_form(self):
        # One through-window segment: every eroded sample sees chord 2r of
        # its own fiber, so K = 2r (1-2r) / (rho^2 (1-2r)^2) = 2r / (1-2r).
        fs = FiberSet(fibers=[horizontal(0.5, 0, 1)], window=Window((0, 0), (1, 1)))
        radii = np.array([0.05, 0.1, 0.2])
        curve = kf_direct(fs, radii)
        np.testing.assert_allclose(curve.values, 2 * radii / (1 - 2 * radii), rtol=1e-9)

    def test_two_parallel_fibers_closed_form(self):
        # Long parallel lines 0.3 apart through [-1,1]^2.  At r=0.5 each
        # sample sees its own chord 2r plus the neighbor chord
        # 2 sqrt(r^2-0.09); at r=0.25 the neighbor is out of reach.
        w = Window((-1, -1), (1, 1))
        fs = FiberSet(
            fibers=[horizontal(0.15, -3, 3), horizontal(-0.15, -3, 3)], window=w
        )
        rho = estimate_rho(fs)
        assert rho == pytest.approx(1.0)
        curve = kf_direct(fs, [0.25, 0.5])

        def expected(r, cross):
            ball_len = 2 * r + cross  # own chord plus neighbor chord
            eroded_side = 2 - 2 * r
            fiber_len_eroded = 2 * eroded_side  # two fibers crossing it
            return ball_len * fiber_len_eroded / (rho**2 * eroded_side**2)

        np.testing.assert_allclose(
            curve.values,
            [expected(0.25, 0.0), expected(0.5, 2 * np.sqrt(0.5**2 - 0.09))],
            rtol=1e-9,
        )

    def test_neighbor_chord_matches_dense_sampling_oracle(self):
        # The chord a ball of radius r cuts from a parallel line 0.3 away:
        # dense sampling of the neighbor fiber is the independent oracle for
        # the 2 sqrt(r^2 - 0.09) jump.
        from curvestat import ball_intersection_length

        f2 = horizontal(-0.15, -3, 3)
        u = np.array([[0.0, 0.15]])
        r = 0.5
        n = 1_000_000
        arcs = (np.arange(n) + 0.5) * (f2.length / n)
        pts = f2.point_at(arcs)
        dense = (np.linalg.norm(pts - u, axis=1) <= r).sum() * (f2.length / n)
        closed_form = 2 * np.sqrt(r**2 - 0.09)
        assert dense == pytest.approx(closed_form, rel=1e-4)
        assert ball_intersection_length(f2, u, r)[0] == pytest.approx(closed_form, rel=1e-12)

    def test_empty_fiber_set(self):
        with pytest.raises(InvalidInputError):
            kf_direct(FiberSet(fibers=[], window=Window((0, 0), (1, 1))), [0.1])

    def test_radii_truncated_when_erosion_empties(self):
        fs = FiberSet(fibers=[horizontal(0.5, 0, 1)], window=Window((0, 0), (1, 1)))
        curve = kf_direct(fs, [0.1, 0.2, 0.6])
        np.testing.assert_array_equal(curve.radii, [0.1, 0.2])
        assert curve.meta["truncated"] is True
        assert curve.meta["dropped_radii"] == [0.6]

    def test_scaling_covariance(self):
        w = Window((-1, -1), (1, 1))
        fs = FiberSet(
            fibers=[horizontal(0.15, -3, 3), horizontal(-0.15, -3, 3)], window=w
        )
        radii = np.array([0.25, 0.5])
        base = kf_direct(fs, radii)
        s = 3.0
        fs_s = FiberSet(
            fibers=[Polyline(f.vertices * s) for f in fs.fibers],
            window=Window(w.lo * s, w.hi * s),
        )
        scaled = kf_direct(fs_s, radii * s)
        np.testing.assert_allclose(scaled.values, s**2 * base.values, rtol=1e-6)


class TestCoxSample:
    def test_poisson_mean(self):
        # Unit-length fiber, rate 10: mean count over 10^4 seeds within
        # 3 sigma of 10.
        fs = FiberSet(fibers=[horizontal(0.5, 0, 1)], window=Window((0, 0), (1, 1)))
        counts = [
            cox_sample(fs, 10.0, seed).n_interior + cox_sample(fs, 10.0, seed).n_guard
            for seed in range(10_000)
        ]
        mean = np.mean(counts)
        assert abs(mean - 10.0) <= 3 * np.sqrt(10.0) / np.sqrt(10_000)

    def test_zero_fibers_empty_sample(self):
        fs = FiberSet(fibers=[], window=Window((0, 0), (1, 1)))
        ps = cox_sample(fs, 100.0, 0)
        assert ps.n_interior == 0 and ps.n_guard == 0

    def test_arc_positions_uniform(self):
        # Chi-squared on 20 bins of arc positions along a straight fiber.
        fs = FiberSet(fibers=[horizontal(0.5, 0, 1)], window=Window((0, 0), (1, 1)))
        ps = cox_sample(fs, 10_000.0, 7)
        xs = np.vstack([ps.interior, ps.guard])[:, 0]
        counts, _ = np.histogram(xs, bins=20, range=(0, 1))
        assert stats.chisquare(counts).pvalue > 0.001

    def test_deterministic_per_seed(self):
        fs = FiberSet(
            fibers=[horizontal(0.2, 0, 1), horizontal(0.8, 0, 1)],
            window=Window((0, 0), (1, 1)),
        )
        a, b = cox_sample(fs, 50.0, 3), cox_sample(fs, 50.0, 3)
        np.testing.assert_array_equal(a.interior, b.interior)
        np.testing.assert_array_equal(a.guard, b.guard)

    def test_per_fiber_streams_stable_under_append(self):
        w = Window((0, 0), (1, 1))
        f1, f2, f3 = horizontal(0.2, 0, 1), horizontal(0.5, 0, 1), horizontal(0.8, 0, 1)
        two = cox_sample(FiberSet(fibers=[f1, f2], window=w), 40.0, 11)
        three = cox_sample(FiberSet(fibers=[f1, f2, f3], window=w), 40.0, 11)
        # Points from the first two fibers are unchanged by appending a third.
        n_two = len(two.interior)
        np.testing.assert_array_equal(three.interior[:n_two], two.interior)

    def test_labels_split_by_window(self):
        fs = FiberSet(fibers=[horizontal(0.5, -1, 2)], window=Window((0, 0), (1, 1)))
        ps = cox_sample(fs, 200.0, 5)
        assert ps.n_interior > 0 and ps.n_guard > 0
        assert fs.window.contains(ps.interior).all()
        assert not fs.window.contains(ps.guard).any()


class TestKfViaCox:
    def test_deterministic(self):
        fs = FiberSet(fibers=[horizontal(0.5, -1, 2)], window=Window((0, 0), (1, 1)))
        a = kf_via_cox(fs, 300.0, 9)
        b = kf_via_cox(fs, 300.0, 9)
        np.testing.assert_array_equal(a.radii, b.radii)
        np.testing.assert_array_equal(a.values, b.values)

    def test_too_few_points(self):
        fs = FiberSet(fibers=[horizontal(0.5, 0, 1)], window=Window((0, 0), (1, 1)))
        with pytest.raises(CoxSampleError) as err:
            kf_via_cox(fs, 1e-6, 0)
        assert err.value.n_interior + err.value.n_guard < 2

    def test_single_extended_fiber_closed_form(self):
        # For a fiber running far beyond the window every interior point
        # sees its full chord 2r, so the point-based estimate converges to
        # 2r / rho with rho = 1 here.  (The eroded-window estimator weights
        # the window differently on such a degenerate one-fiber set; they
        # coincide only for statistically homogeneous fiber sets.)
        fs = FiberSet(fibers=[horizontal(0.5, -3, 4)], window=Window((0, 0), (1, 1)))
        radii = np.array([0.1, 0.2])
        vals = np.mean(
            [kf_via_cox(fs, 400.0, seed).evaluate(radii) for seed in range(20)], axis=0
        )
        np.testing.assert_allclose(vals, 2 * radii, rtol=0.05)


class TestPairAssociation:
    def test_disjoint_far_curves(self):
        w = Window((-2, -2), (2, 2))
        a, b = horizontal(0.0, 0, 1), horizontal(1.5, 0, 1)
        assert pair_association(a, b, w, 0.5) == 0.0

    def test_identical_unit_segment_large_radius(self):
        # Indicator is identically 1: the double integral equals 1*1.
        w = Window((-2, -2), (2, 2))
        seg = horizontal(0.0, 0, 1)
        assert pair_association(seg, seg, w, 10.0) == pytest.approx(1.0, rel=1e-9)

    def test_parallel_segments_brute_force(self):
        # 1e3 x 1e3 brute-force double sum oracle, 1% tolerance.
        w = Window((-2, -2), (2, 2))
        a, b = horizontal(0.0, 0, 1), horizontal(0.3, 0, 1)
        r = 0.5
        n = 1000
        xs = (np.arange(n) + 0.5) / n
        pa = np.c_[xs, np.zeros(n)]
        pb = np.c_[xs, np.full(n, 0.3)]
        d = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2)
        brute = (d <= r).sum() / (n * n)
        got = pair_association(a, b, w, r)
        assert got == pytest.approx(brute, rel=0.01)

    def test_symmetric_when_window_contains_both(self):
        w = Window((-2, -2), (2, 2))
        a = Polyline([(0, 0), (0.6, 0.2), (1.0, -0.1)])
        b = Polyline([(0.1, 0.4), (0.8, 0.5)])
        ab = pair_association(a, b, w, 0.45, spacing=1e-4)
        ba = pair_association(b, a, w, 0.45, spacing=1e-4)
        assert ab == pytest.approx(ba, rel=1e-3)

    def test_sum_decomposition_matches_kf_direct(self, rng):
        # rho^2 |A| K_f(r) equals the sum of pairwise association integrals
        # over A = the eroded window, self-pairs included.
        w = Window((-1, -1), (1, 1))
        r = 0.3
        for _ in range(10):
            fibers = []
            for _ in range(3):
                start = rng.uniform(-1, 1, size=2)
                step = rng.uniform(-0.8, 0.8, size=(3, 2))
                fibers.append(Polyline(np.vstack([start, start + np.cumsum(step, axis=0)])))
            fs = FiberSet(fibers=fibers, window=w)
            try:
                rho = estimate_rho(fs)
            except InvalidInputError:
                continue
            spacing = 0.002
            curve = kf_direct(fs, [r], spacing=spacing)
            from curvestat import erode_window

            eroded = erode_window(w, r)
            total = sum(
                pair_association(fi, fj, eroded, r, spacing=spacing)
                for fi in fibers
                for fj in fibers
            )
            lhs = rho**2 * eroded.volume * curve.values[0]
            assert lhs == pytest.approx(total, rel=1e-9)
