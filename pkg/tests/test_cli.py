import numpy as np
import pytest

from curvestat import io as csvio
from curvestat.cli import main
from curvestat.errors import DataFormatError


def run(args):
    return main([str(a) for a in args])


class TestGenerate:
    def test_grid_points_file(self, tmp_path):
        out = tmp_path / "pts.csv"
        assert run(["generate", "points", "--pattern", "grid", "--k", 5,
                    "--seed", 0, "-o", out]) == 0
        ps = csvio.read_points(out)
        assert ps.n_interior == 25

    def test_curves_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        common = ["generate", "curves", "--preset", "wide", "--n", 3, "--seed", 7,
                  "--max-len", 1.0]
        assert run(common + ["-o", a]) == 0
        assert run(common + ["-o", b]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_curves_roundtrip_loadable_by_estimators(self, tmp_path):
        out = tmp_path / "c.csv"
        assert run(["generate", "curves", "--preset", "7cluster", "--n", 4,
                    "--seed", 1, "--max-len", 1.0, "-o", out]) == 0
        cs = csvio.read_curves(out)
        assert len(cs.curves) == 4
        for est_args in (
            ["estimate", "km", "-i", out, "--radii", "0.1,0.3", "-o", tmp_path / "km.csv"],
            ["estimate", "kc", "-i", out, "--sigma", 0.5, "-o", tmp_path / "kc.csv"],
            ["estimate", "kf-direct", "-i", out, "--radii", "0.1,0.3",
             "-o", tmp_path / "kf.csv"],
            ["estimate", "kf-cox", "-i", out, "--rate", 50, "--seed", 2,
             "-o", tmp_path / "kfc.csv"],
        ):
            assert run(est_args) == 0

    def test_metadata_echoes_resolved_config(self, tmp_path):
        out = tmp_path / "pts.csv"
        run(["generate", "points", "--pattern", "uniform", "--n", 20, "--seed", 3,
             "-o", out])
        text = out.read_text()
        assert "# schema: 1" in text
        assert "margin=0.5" in text  # default materialized
        assert "seed=3" in text


class TestEstimate:
    def test_kpoints_two_point_example(self, tmp_path):
        src = tmp_path / "two.csv"
        src.write_text(
            "# schema: 1\n# window: lo=0.0 0.0 hi=1.0 1.0\n# config: manual=1\n"
            "x,y,label\n0.0,0.0,red\n0.5,0.0,red\n"
        )
        out = tmp_path / "est.csv"
        assert run(["estimate", "kpoints", "-i", src, "-o", out]) == 0
        curve, reference, meta = csvio.read_estimate(out)
        np.testing.assert_array_equal(curve.radii, [0.5])
        np.testing.assert_array_equal(curve.values, [0.5])
        assert reference[0] == pytest.approx(np.pi * 0.25)
        assert meta["estimator"] == "kpoints"

    def test_kc_without_sigma_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["estimate", "kc", "-i", "x.csv", "-o", "y.csv"])
        assert exc.value.code == 2

    def test_seed_rejected_for_deterministic_estimators(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["estimate", "km", "-i", "x.csv", "--seed", 1, "-o", "y.csv"])
        assert exc.value.code == 2

    def test_corrupt_file_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("# schema: 1\n# window: lo=0.0 0.0 hi=1.0 1.0\n# config: a=1\n"
                       "x,y,label\n0.1,not-a-number,red\n")
        assert run(["estimate", "kpoints", "-i", bad, "-o", tmp_path / "o.csv"]) == 3

    def test_wrong_schema_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("# schema: 99\n# window: lo=0.0 0.0 hi=1.0 1.0\n# config: a=1\n"
                       "x,y,label\n0.1,0.2,red\n")
        assert run(["estimate", "kpoints", "-i", bad, "-o", tmp_path / "o.csv"]) == 3

    def test_missing_file_is_data_error(self, tmp_path):
        assert run(["estimate", "kpoints", "-i", tmp_path / "none.csv",
                    "-o", tmp_path / "o.csv"]) == 3

    def test_single_point_is_numeric_error(self, tmp_path):
        src = tmp_path / "one.csv"
        src.write_text("# schema: 1\n# window: lo=0.0 0.0 hi=1.0 1.0\n# config: a=1\n"
                       "x,y,label\n0.5,0.5,red\n")
        assert run(["estimate", "kpoints", "-i", src, "-o", tmp_path / "o.csv"]) == 4

    def test_km_wide_monotone_with_saturation(self, tmp_path):
        curves_file = tmp_path / "c.csv"
        run(["generate", "curves", "--preset", "wide", "--n", 5, "--seed", 2,
             "--max-len", 1.0, "-o", curves_file])
        out = tmp_path / "km.csv"
        assert run(["estimate", "km", "-i", curves_file,
                    "--radii", "0.1:6.0:8", "-o", out]) == 0
        curve, _, _ = csvio.read_estimate(out)
        assert (np.diff(curve.values) >= -1e-12).all()
        # Saturation: radius beyond everything reproduces the direct formula.
        from curvestat import clipped_length
        cs = csvio.read_curves(curves_file)
        lens = np.array([clipped_length(c, cs.window) for c in cs.curves])
        rho = lens.sum() / cs.window.volume
        n = len(lens)
        expected = sum(
            (lens.sum() - lens[j]) / lens[j] for j in range(n)
        ) / (n * rho)
        assert curve.values[-1] == pytest.approx(expected, rel=1e-9)


class TestRoundTripStability:
    def test_generate_estimate_byte_stable(self, tmp_path, monkeypatch):
        # Same seed and flags (including relative paths) twice over: every
        # byte matches, including the echoed config.
        files = []
        for sub in ("one", "two"):
            d = tmp_path / sub
            d.mkdir()
            monkeypatch.chdir(d)
            run(["generate", "curves", "--preset", "2cluster", "--n", 4, "--seed", 5,
                 "--max-len", 1.0, "-o", "c.csv"])
            run(["estimate", "kc", "-i", "c.csv", "--sigma", 0.5, "-o", "e.csv"])
            files.append(((d / "c.csv").read_bytes(), (d / "e.csv").read_bytes()))
        assert files[0] == files[1]
