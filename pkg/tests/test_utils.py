import numpy as np

from curvestat.morph_k import CurveSet, km
from curvestat.geometry import Window
from curvestat.utils import parallel_map, thread_count


class TestThreadCount:
    def test_zero_means_auto(self, monkeypatch):
        monkeypatch.setenv("CURVESTAT_THREADS", "0")
        assert thread_count() >= 1

    def test_cap_applies(self, monkeypatch):
        monkeypatch.setenv("CURVESTAT_THREADS", "1")
        assert thread_count() == 1

    def test_garbage_falls_back_to_auto(self, monkeypatch):
        monkeypatch.setenv("CURVESTAT_THREADS", "lots")
        assert thread_count() >= 1


class TestParallelMap:
    def test_preserves_order(self, monkeypatch):
        monkeypatch.setenv("CURVESTAT_THREADS", "4")
        assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]

    def test_result_independent_of_worker_count(self, monkeypatch):
        w = Window((-1, -1), (1, 1))
        cs = CurveSet(
            curves=[[(-0.8, -0.2), (0.9, -0.3)], [(-0.5, 0.4), (0.5, 0.3)],
                    [(-0.2, -0.6), (0.8, -0.5)]],
            window=w,
        )
        radii = np.array([0.2, 0.6])
        monkeypatch.setenv("CURVESTAT_THREADS", "1")
        serial = km(cs, radii).values
        monkeypatch.setenv("CURVESTAT_THREADS", "8")
        threaded = km(cs, radii).values
        np.testing.assert_array_equal(serial, threaded)
