"""CSV, JSON and SVG reports for experiment records, byte-stable for equal inputs."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from ..errors import DomainError
from .records import ExperimentRecord

SCHEMA_VERSION = 1
CSV_COLUMNS = ("experiment", "param_json", "abscissa", "value")


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def _dumps(obj, **kw) -> str:
    return json.dumps(_clean(obj), sort_keys=True, allow_nan=False, **kw)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        params = _dumps(rec.params, separators=(",", ":"))
        for a, v in rec.measurements:
            w.writerow([rec.experiment, params, repr(float(a)), repr(float(v))])
    return buf.getvalue()


def read_report_csv(source) -> list[dict]:
    """Parse a report CSV back into typed rows."""
    text = Path(source).read_text() if isinstance(source, (str, Path)) and Path(source).exists() else str(source)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError(f"unexpected header {rows[:1]!r}")
    return [
        {"experiment": r[0], "params": json.loads(r[1]), "abscissa": float(r[2]), "value": float(r[3])}
        for r in rows[1:]
    ]


def records_to_json(records) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "records": [rec.as_dict() for rec in records]}
    return _dumps(doc, indent=2) + "\n"


def record_to_svg(rec: ExperimentRecord, width: int = 480, height: int = 320) -> str:
    """Self-contained log-log scatter with the fitted line, if any."""
    pts = [(a, v) for a, v in rec.measurements if a > 0 and v > 0]
    pad = 48
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<text x="{pad}" y="20" font-family="monospace" font-size="12">{rec.experiment}</text>',
    ]
    if len(pts) >= 2:
        lx = np.log10([a for a, _ in pts])
        ly = np.log10([v for _, v in pts])
        x0, x1 = float(lx.min()), float(lx.max())
        y0, y1 = float(ly.min()), float(ly.max())
        x1 = x1 if x1 > x0 else x0 + 1.0
        y1 = y1 if y1 > y0 else y0 + 1.0

        def sx(x):
            return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

        def sy(y):
            return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

        out.append(
            f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" fill="none" stroke="black"/>'
        )
        out.append(f'<text x="{pad}" y="{height - 16}" font-family="monospace" font-size="10">log10 x: {x0:.3f} .. {x1:.3f}</text>')
        out.append(f'<text x="{pad}" y="{pad - 6}" font-family="monospace" font-size="10">log10 y: {y0:.3f} .. {y1:.3f}</text>')
        for x, y in zip(lx, ly):
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="black"/>')
        if rec.fit is not None:
            k, c = rec.fit.slope, rec.fit.intercept / math.log(10)
            out.append(
                f'<line x1="{sx(x0):.2f}" y1="{sy(k * x0 + c):.2f}" x2="{sx(x1):.2f}" y2="{sy(k * x1 + c):.2f}" stroke="red"/>'
            )
            out.append(
                f'<text x="{width - pad - 150}" y="20" font-family="monospace" font-size="11">slope {k:.4f} res {rec.fit.residual:.3g}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_report(records, out_dir, *, prefix: str = "report", formats=("csv", "json", "svg")) -> list[Path]:
    """Write the report files and return their paths."""
    records = list(records)
    if not records:
        raise DomainError("no records to report")
    for rec in records:
        rec.validate()
    unknown = set(formats) - {"csv", "json", "svg"}
    if unknown:
        raise DomainError(f"unknown report formats {sorted(unknown)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if "csv" in formats:
        paths.append(out / f"{prefix}.csv")
        paths[-1].write_text(records_to_csv(records))
    if "json" in formats:
        paths.append(out / f"{prefix}.json")
        paths[-1].write_text(records_to_json(records))
    if "svg" in formats:
        for i, rec in enumerate(records):
            paths.append(out / f"{prefix}_{i:02d}_{rec.experiment}.svg")
            paths[-1].write_text(record_to_svg(rec))
    return paths
