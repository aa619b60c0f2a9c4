"""CSV and SVG writers with byte-stable formatting."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import OutputError, ValidationError


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def csv_text(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    width = len(header)
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != width:
            raise ValidationError(f"row {i} has {len(row)} fields, header has {width}")
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(path, exc.strerror or str(exc)) from exc
    return path


def write_csv(rows, header, path) -> Path:
    """Header line, then one line per row; floats with 17 significant digits."""
    return _write(path, csv_text(rows, header))


def read_csv(path):
    """Header and rows as strings (the inverse of :func:`write_csv`)."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            return header, [row for row in reader]
    except OSError as exc:
        raise OutputError(path, exc.strerror or str(exc)) from exc


def svg_text(points, width_px: int = 800, viewbox=None) -> str:
    """SVG source; ``viewbox = (x, y, w, h)`` in SVG units overrides the fitted one."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValidationError("a polyline needs at least two (x, z) points")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("polyline points must be finite")
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    extent = float(np.max(hi - lo))
    if extent == 0:
        raise ValidationError("all polyline points coincide")
    if viewbox is None:
        margin = 0.05 * extent
        vx, vy = lo[0] - margin, -hi[1] - margin
        vw, vh = hi[0] - lo[0] + 2 * margin, hi[1] - lo[1] + 2 * margin
    else:
        vx, vy, vw, vh = map(float, viewbox)
        if not (vw > 0 and vh > 0):
            raise ValidationError("viewbox width and height must be positive")
    height_px = max(1, int(round(width_px * vh / vw)))
    # SVG y grows downward, so plot -z
    coords = " ".join(f"{x:.9g},{-z:.9g}" for x, z in pts)
    view = f"{vx:.9g} {vy:.9g} {vw:.9g} {vh:.9g}"
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height_px}" '
        f'viewBox="{view}">\n'
        f'<polyline fill="none" stroke="black" stroke-width="1.5" '
        f'vector-effect="non-scaling-stroke" points="{coords}"/>\n'
        "</svg>\n"
    )


def write_svg(points, path, viewbox=None) -> Path:
    """Standalone SVG holding one polyline through ``(x, z)``, z upward."""
    return _write(path, svg_text(points, viewbox=viewbox))

