"""CSV, SVG and metadata emitters for sweep results."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .sweep import SweepResult

UNSTABLE = "unstable"
ERROR = "error"
_SVG_COLOURS = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666")


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


def csv_header(result: SweepResult) -> list[str]:
    return ["axis", *result.labels, "spectral_abscissa", "stable"]


def csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(result))
    for row in result.rows:
        marker = UNSTABLE if row.error is None else ERROR
        ens = [marker if e is None else fmt(e) for e in row.entanglement]
        w.writerow([fmt(row.axis_value), *ens, fmt(row.spectral_abscissa), "true" if row.stable else "false"])
    return buf.getvalue()


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def emit_csv(result: SweepResult, path) -> Path:
    return _write(path, csv_text(result))


def read_csv(path) -> tuple[list[str], list[dict]]:
    """Parse an emitted CSV back into ``(header, rows)``; markers stay strings."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = []
    for rec in reader:
        row = {}
        for key, val in zip(header, rec):
            if key == "stable":
                row[key] = val == "true"
            elif val in (UNSTABLE, ERROR):
                row[key] = val
            else:
                row[key] = float(val)
        rows.append(row)
    return header, rows


def metadata(result: SweepResult) -> dict:
    return {
        "scenario": result.scenario_id,
        "axis": result.axis_name,
        "axis_unit": result.axis_unit,
        "observables": list(result.labels),
        "config_hash": result.config_hash,
        "constants_version": result.constants_version,
        "points": len(result.rows),
        "errors": {fmt(r.axis_value): r.error for r in result.rows if r.error},
    }


def emit_metadata(result: SweepResult, path) -> Path:
    return _write(path, json.dumps(metadata(result), indent=2, sort_keys=True) + "\n")


def svg_text(result: SweepResult, width: int = 720, height: int = 440) -> str:
    left, right, top, bottom = 70, 170, 30, 60
    pw, ph = width - left - right, height - top - bottom
    log_x = result.axis_name == "temperature"

    xs = [r.axis_value for r in result.rows]
    ys = [e for r in result.rows for e in r.entanglement if e is not None]
    tx = [math.log10(x) for x in xs] if log_x else list(xs)
    x_lo, x_hi = (min(tx), max(tx)) if tx else (0.0, 1.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    y_hi = max(ys) if ys and max(ys) > 0 else 1.0

    def px(t):
        return left + (t - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return top + ph - y / y_hi * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f"<title>{result.scenario_id} ({result.config_hash[:12]})</title>",
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(5):
        t = x_lo + (x_hi - x_lo) * k / 4
        lab = f"{10**t:.3g}" if log_x else f"{t:.3g}"
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{lab}</text>')
        y = y_hi * k / 4
        out.append(f'<text x="{left - 6}" y="{py(y) + 4:.2f}" text-anchor="end">{y:.3g}</text>')
    unit = "" if result.axis_unit == "1" else f" [{result.axis_unit}]"
    out.append(
        f'<text x="{left + pw / 2:.2f}" y="{height - 18}" text-anchor="middle">{result.axis_name}{unit}</text>'
    )
    out.append(
        f'<text x="18" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {top + ph / 2:.2f})">E_N</text>'
    )

    for k, label in enumerate(result.labels):
        colour = _SVG_COLOURS[k % len(_SVG_COLOURS)]
        segment: list[str] = []
        segments = []
        for t, row in zip(tx, result.rows):
            e = row.entanglement[k]
            if e is None:
                if segment:
                    segments.append(segment)
                segment = []
                continue
            segment.append(f"{px(t):.2f},{py(e):.2f}")
        if segment:
            segments.append(segment)
        for seg in segments:
            out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{" ".join(seg)}"/>')
        ly = top + 14 + 18 * k
        out.append(f'<line x1="{left + pw + 12}" y1="{ly - 4}" x2="{left + pw + 36}" y2="{ly - 4}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg_plot(result: SweepResult, path) -> Path:
    return _write(path, svg_text(result))
