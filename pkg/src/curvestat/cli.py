"""Command-line workflow: generate datasets, run estimators, emit CSVs.

Exit codes: 0 success, 2 usage error, 3 data error (unreadable or malformed
files), 4 numeric/precondition error (estimator rejected the data).  All
randomness flows through an explicit --seed; estimators are deterministic
except kf-cox, which requires one.  CURVESTAT_THREADS caps internal
parallelism (0 = auto).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as csvio
from .current_k import KernelSpec, kc
from .errors import DataFormatError, EstimationError, InvalidInputError
from .estimators import default_radii_grid
from .fiber_k import FiberSet, kf_direct, kf_via_cox
from .geometry import Window
from .morph_k import km
from .point_k import csr_reference, ripley_k_points
from .synth import CURVE_PRESETS, gen_points, preset_curveset

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _parse_window(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be comma-separated numbers: {text!r}")
    if len(vals) not in (4, 6):
        raise argparse.ArgumentTypeError("window needs 4 numbers (2D) or 6 (3D): lo then hi")
    half = len(vals) // 2
    return vals[:half], vals[half:]


def _parse_radii(text):
    """Either an explicit comma list "0.1,0.2,0.3" or "start:stop:count"."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("radii range must be start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad radii range: {text!r}")
        return np.linspace(start, stop, count)
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad radii list: {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curvestat",
        description="K-function statistics for point patterns and curve sets.",
        epilog="Set CURVESTAT_THREADS to cap internal parallelism (0 = auto).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate synthetic datasets")
    gen_sub = gen.add_subparsers(dest="kind", required=True)

    gp = gen_sub.add_parser("points", help="point patterns (uniform, clusters, grids)")
    gp.add_argument("--pattern", required=True,
                    choices=["uniform", "mother-child", "grid", "noisy-grid"])
    gp.add_argument("--window", type=_parse_window, default=([-1.0, -1.0], [1.0, 1.0]),
                    help="x0,y0,x1,y1 (default -1,-1,1,1)")
    gp.add_argument("--seed", type=int, required=True)
    gp.add_argument("--n", type=int, help="point count (uniform)")
    gp.add_argument("--k", type=int, help="lattice size (grid patterns)")
    gp.add_argument("--sd", type=float, help="jitter / child spread")
    gp.add_argument("--mothers", type=int, help="mother count (mother-child)")
    gp.add_argument("--children", type=int, help="children per mother")
    gp.add_argument("--margin", type=float, default=0.5, help="guard band width")
    gp.add_argument("-o", "--output", required=True)

    gc = gen_sub.add_parser("curves", help="gradient-flow curve sets")
    gc.add_argument("--preset", required=True, choices=sorted(CURVE_PRESETS))
    gc.add_argument("--n", type=int, default=30, help="curve count")
    gc.add_argument("--seed", type=int, required=True)
    gc.add_argument("--window", type=_parse_window, default=([-1.0, -1.0], [1.0, 1.0]))
    gc.add_argument("--max-len", type=float, default=4.0)
    gc.add_argument("--step", type=float, default=1e-3, help="flow integrator step")
    gc.add_argument("--emit-every", type=int, default=20, help="vertex decimation")
    gc.add_argument("--margin", type=float, default=0.5)
    gc.add_argument("--field-seed", type=int, default=None,
                    help="override the pinned random-surface seed")
    gc.add_argument("-o", "--output", required=True)

    est = sub.add_parser("estimate", help="run an estimator on a dataset file")
    est_sub = est.add_subparsers(dest="kind", required=True)

    ep = est_sub.add_parser("kpoints", help="Ripley K for a points file")
    ep.add_argument("-i", "--input", required=True)
    ep.add_argument("-o", "--output", required=True)

    ed = est_sub.add_parser("kf-direct", help="fiber K, erosion-window estimator")
    ed.add_argument("-i", "--input", required=True)
    ed.add_argument("--radii", type=_parse_radii, default=None,
                    help='comma list "0.1,0.2" or range "start:stop:count"')
    ed.add_argument("--spacing", type=float, default=None)
    ed.add_argument("-o", "--output", required=True)

    ec = est_sub.add_parser("kf-cox", help="fiber K via Poisson points on fibers")
    ec.add_argument("-i", "--input", required=True)
    ec.add_argument("--rate", type=float, required=True, help="points per unit length")
    ec.add_argument("--seed", type=int, required=True)
    ec.add_argument("--radii", type=_parse_radii, default=None,
                    help="optional grid; omit for the full step curve")
    ec.add_argument("-o", "--output", required=True)

    em = est_sub.add_parser("km", help="morphological (dilation) K for curves")
    em.add_argument("-i", "--input", required=True)
    em.add_argument("--radii", type=_parse_radii, default=None)
    em.add_argument("--spacing", type=float, default=None)
    em.add_argument("-o", "--output", required=True)

    ek = est_sub.add_parser("kc", help="currents-metric K for curves")
    ek.add_argument("-i", "--input", required=True)
    ek.add_argument("--sigma", type=float, required=True, help="kernel bandwidth (no default)")
    ek.add_argument("--amplitude", type=float, default=1.0)
    ek.add_argument("--samples", type=int, default=50, help="deltas per curve")
    ek.add_argument("-o", "--output", required=True)

    return parser


def _window_from_arg(arg):
    lo, hi = arg
    return Window(lo, hi)


def _cmd_generate_points(args):
    window = _window_from_arg(args.window)
    params = dict(n=args.n, k=args.k, sd=args.sd, n_mothers=args.mothers,
                  children=args.children, margin=args.margin)
    ps = gen_points(args.pattern, window, args.seed, **params)
    config = {"pattern": args.pattern, "seed": args.seed, "margin": args.margin}
    for key in ("n", "k", "sd"):
        if getattr(args, key) is not None:
            config[key] = getattr(args, key)
    if args.mothers is not None:
        config["mothers"] = args.mothers
    if args.children is not None:
        config["children"] = args.children
    csvio.write_points(args.output, ps, config)
    print(f"wrote {ps.n_interior} interior + {ps.n_guard} guard points to {args.output}")
    return EXIT_OK


def _cmd_generate_curves(args):
    window = _window_from_arg(args.window)
    kwargs = dict(n_curves=args.n, seed=args.seed, window=window, step=args.step,
                  max_len=args.max_len, margin=args.margin, emit_every=args.emit_every)
    if args.field_seed is not None:
        kwargs["field_seed"] = args.field_seed
    cs = preset_curveset(args.preset, **kwargs)
    config = {
        "preset": args.preset, "n": args.n, "seed": args.seed, "step": args.step,
        "max_len": args.max_len, "margin": args.margin, "emit_every": args.emit_every,
    }
    if args.field_seed is not None:
        config["field_seed"] = args.field_seed
    csvio.write_curves(args.output, cs, config)
    print(f"wrote {len(cs.curves)} curves to {args.output}")
    return EXIT_OK


def _radii_or_default(args, window):
    if args.radii is not None:
        return args.radii
    return default_radii_grid(window)


def _cmd_estimate(args):
    kind = args.kind
    if kind == "kpoints":
        ps = csvio.read_points(args.input)
        curve = ripley_k_points(ps)
        config = {"input": args.input, "n_interior": ps.n_interior, "n_guard": ps.n_guard}
        reference = lambda r: csr_reference(r, ps.dim)
    elif kind == "kf-direct":
        cs = csvio.read_curves(args.input)
        fs = FiberSet.from_curves(cs)
        radii = _radii_or_default(args, cs.window)
        curve = kf_direct(fs, radii, spacing=args.spacing)
        config = {"input": args.input, "spacing": curve.meta["spacing"],
                  "rho": curve.meta["rho"]}
        reference = lambda r: csr_reference(r, cs.window.dim)
    elif kind == "kf-cox":
        cs = csvio.read_curves(args.input)
        fs = FiberSet.from_curves(cs)
        curve = kf_via_cox(fs, args.rate, args.seed, radii=args.radii)
        config = {"input": args.input, "rate": args.rate, "seed": args.seed}
        reference = lambda r: csr_reference(r, cs.window.dim)
    elif kind == "km":
        cs = csvio.read_curves(args.input)
        radii = _radii_or_default(args, cs.window)
        curve = km(cs, radii, spacing=args.spacing)
        config = {"input": args.input, "spacing": curve.meta["spacing"],
                  "rho": curve.meta["rho"]}
        reference = None
    elif kind == "kc":
        cs = csvio.read_curves(args.input)
        kernel = KernelSpec(amplitude=args.amplitude, sigma=args.sigma)
        curve = kc(cs, kernel, m=args.samples)
        config = {"input": args.input, "sigma": args.sigma,
                  "amplitude": args.amplitude, "samples": args.samples}
        reference = None
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidInputError(f"unknown estimator {kind!r}")
    csvio.write_estimate(args.output, curve, kind, config, reference=reference)
    print(f"wrote {len(curve)} samples to {args.output}")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            if args.kind == "points":
                return _cmd_generate_points(args)
            return _cmd_generate_curves(args)
        return _cmd_estimate(args)
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvalidInputError, EstimationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
