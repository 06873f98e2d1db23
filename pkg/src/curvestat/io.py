"""Plain-text file formats: points, curves, and estimate CSVs.

Every file opens with metadata lines (``# key: value``) carrying the schema
version, the observation window where applicable, and the fully resolved
generator or estimator configuration, followed by a CSV header and rows.
Floats are written with ``repr`` so files round-trip exactly and identical
runs produce identical bytes.  Readers fail loudly on anything malformed.
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import DataFormatError
from .geometry import Polyline, Window
from .morph_k import CurveSet
from .point_k import EstimateCurve, LabeledPointSet

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "read_curves",
    "read_estimate",
    "read_points",
    "write_curves",
    "write_estimate",
    "write_points",
]


def _format_config(config):
    parts = []
    for key, value in config.items():
        if isinstance(value, float):
            text = repr(value)
        elif isinstance(value, (list, tuple, np.ndarray)):
            text = ",".join(repr(float(v)) for v in value)
        else:
            text = str(value)
        if " " in text:
            raise ValueError(f"config value for {key!r} must not contain spaces")
        parts.append(f"{key}={text}")
    return " ".join(parts)


def _window_line(window):
    lo = " ".join(repr(float(v)) for v in window.lo)
    hi = " ".join(repr(float(v)) for v in window.hi)
    return f"lo={lo} hi={hi}"


def _parse_window(text):
    try:
        lo_part, hi_part = text.split("hi=")
        lo = [float(v) for v in lo_part.replace("lo=", "").split()]
        hi = [float(v) for v in hi_part.split()]
        return Window(lo, hi)
    except Exception as exc:
        raise DataFormatError(f"bad window metadata: {text!r}") from exc


def _read_meta_and_rows(path):
    meta = {}
    rows = []
    header = None
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#"):
                    body = line[1:].strip()
                    if ":" not in body:
                        raise DataFormatError(f"bad metadata line: {line!r}")
                    key, value = body.split(":", 1)
                    meta[key.strip()] = value.strip()
                elif header is None:
                    header = line.split(",")
                else:
                    rows.append(line.split(","))
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if header is None:
        raise DataFormatError(f"{path}: no CSV header found")
    if meta.get("schema") != str(SCHEMA_VERSION):
        raise DataFormatError(
            f"{path}: unsupported schema {meta.get('schema')!r} (need {SCHEMA_VERSION})"
        )
    return meta, header, rows


def _open_writer(path, meta):
    fh = open(path, "w", encoding="utf-8", newline="")
    for key, value in meta.items():
        fh.write(f"# {key}: {value}\n")
    return fh


def write_points(path, ps, config):
    """Write a labeled point set; ``config`` is echoed into the metadata."""
    dim = ps.dim
    meta = {
        "schema": SCHEMA_VERSION,
        "window": _window_line(ps.window),
        "config": _format_config(config),
    }
    cols = ["x", "y", "z"][:dim] + ["label"]
    with _open_writer(path, meta) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for pts, label in ((ps.interior, "red"), (ps.guard, "blue")):
            for p in pts:
                writer.writerow([repr(float(v)) for v in p] + [label])


def read_points(path):
    meta, header, rows = _read_meta_and_rows(path)
    if "window" not in meta:
        raise DataFormatError(f"{path}: missing window metadata")
    window = _parse_window(meta["window"])
    dim = window.dim
    if header != ["x", "y", "z"][:dim] + ["label"]:
        raise DataFormatError(f"{path}: unexpected header {header}")
    interior, guard = [], []
    for row in rows:
        if len(row) != dim + 1:
            raise DataFormatError(f"{path}: malformed row {row}")
        try:
            point = [float(v) for v in row[:dim]]
        except ValueError as exc:
            raise DataFormatError(f"{path}: non-numeric coordinate in {row}") from exc
        label = row[dim]
        if label == "red":
            interior.append(point)
        elif label == "blue":
            guard.append(point)
        else:
            raise DataFormatError(f"{path}: unknown label {label!r}")
    try:
        return LabeledPointSet(interior=interior, guard=guard, window=window)
    except Exception as exc:
        raise DataFormatError(f"{path}: inconsistent point set: {exc}") from exc


def write_curves(path, cs, config):
    """Write a curve set as (curve_id, vertex_index, coords) rows."""
    dim = cs.window.dim
    meta = {
        "schema": SCHEMA_VERSION,
        "window": _window_line(cs.window),
        "config": _format_config(config),
    }
    cols = ["curve_id", "vertex_index"] + ["x", "y", "z"][:dim]
    with _open_writer(path, meta) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for cid, curve in enumerate(cs.curves):
            for vid, vertex in enumerate(curve.vertices):
                writer.writerow([cid, vid] + [repr(float(v)) for v in vertex])


def read_curves(path):
    meta, header, rows = _read_meta_and_rows(path)
    if "window" not in meta:
        raise DataFormatError(f"{path}: missing window metadata")
    window = _parse_window(meta["window"])
    dim = window.dim
    if header != ["curve_id", "vertex_index"] + ["x", "y", "z"][:dim]:
        raise DataFormatError(f"{path}: unexpected header {header}")
    by_curve = {}
    for row in rows:
        if len(row) != dim + 2:
            raise DataFormatError(f"{path}: malformed row {row}")
        try:
            cid, vid = int(row[0]), int(row[1])
            point = [float(v) for v in row[2 : 2 + dim]]
        except ValueError as exc:
            raise DataFormatError(f"{path}: non-numeric field in {row}") from exc
        by_curve.setdefault(cid, []).append((vid, point))
    curves = []
    for cid in sorted(by_curve):
        entries = by_curve[cid]
        indices = [v for v, _ in entries]
        if indices != list(range(len(entries))):
            raise DataFormatError(f"{path}: curve {cid} vertex indices not consecutive")
        try:
            curves.append(Polyline([p for _, p in entries]))
        except Exception as exc:
            raise DataFormatError(f"{path}: curve {cid} invalid: {exc}") from exc
    if not curves:
        raise DataFormatError(f"{path}: no curves")
    return CurveSet(curves=tuple(curves), window=window)


def write_estimate(path, curve, estimator, config, reference=None):
    """Write an estimate curve; ``reference(r)`` adds a reference column."""
    meta = {
        "schema": SCHEMA_VERSION,
        "estimator": estimator,
        "config": _format_config(config),
    }
    with _open_writer(path, meta) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", "value", "reference"] if reference else ["r", "value"])
        for i, (r, v) in enumerate(zip(curve.radii, curve.values)):
            row = [repr(float(r)), repr(float(v))]
            if reference:
                row.append(repr(float(reference(r))))
            writer.writerow(row)


def read_estimate(path):
    """Read an estimate CSV: returns (EstimateCurve, reference array or
    None, metadata dict)."""
    meta, header, rows = _read_meta_and_rows(path)
    if header not in (["r", "value"], ["r", "value", "reference"]):
        raise DataFormatError(f"{path}: unexpected header {header}")
    try:
        data = np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise DataFormatError(f"{path}: non-numeric row") from exc
    if len(rows) == 0:
        data = np.empty((0, len(header)))
    if data.ndim != 2 or data.shape[1] != len(header):
        raise DataFormatError(f"{path}: ragged rows")
    reference = data[:, 2] if len(header) == 3 else None
    try:
        curve = EstimateCurve(radii=data[:, 0], values=data[:, 1], meta=dict(meta))
    except Exception as exc:
        raise DataFormatError(f"{path}: invalid estimate data: {exc}") from exc
    return curve, reference, meta
