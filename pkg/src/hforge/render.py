"""Deterministic JSON, JSON-lines, CSV and SVG heatmap output."""

from __future__ import annotations

import csv
import io
import json
import math
from html import escape

import numpy as np

__all__ = ["clean", "dumps", "jsonl", "csv_text", "heatmap_svg"]

DIGITS = 15


def clean(x):
    """JSON-ready copy: floats at 15 significant digits, complex as [re, im], numpy scalars unwrapped."""
    if isinstance(x, dict):
        return {str(k): clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{DIGITS}g}") + 0.0  # folds -0.0
    if isinstance(x, (complex, np.complexfloating)):
        return [clean(x.real), clean(x.imag)]
    if x is None or isinstance(x, str):
        return x
    return str(x)


def dumps(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True)


def jsonl(rows) -> str:
    return "".join(dumps(r) + "\n" for r in rows)


def csv_text(rows: list[dict], columns: list[str] | None = None) -> str:
    """RFC 4180: CRLF line ends, minimal quoting."""
    rows = [clean(r) for r in rows]
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _ramp(t: float) -> str:
    """Linear blue -> white -> red for t in [0, 1]."""
    lo, mid, hi = (49, 54, 149), (255, 255, 255), (165, 0, 38)
    if t < 0.5:
        a, b, s = lo, mid, t / 0.5
    else:
        a, b, s = mid, hi, (t - 0.5) / 0.5
    return "#%02x%02x%02x" % tuple(round(x + (y - x) * s) for x, y in zip(a, b))


def heatmap_svg(
    grid,
    row_labels: list[str] | None = None,
    col_labels: list[str] | None = None,
    title: str = "",
    cell: int = 28,
    annotate: bool | None = None,
) -> str:
    """Rect grid with a two-color ramp; min and max are printed under the grid."""
    G = np.asarray(grid, dtype=float)
    nr, nc = G.shape
    row_labels = row_labels if row_labels is not None else [str(i) for i in range(nr)]
    col_labels = col_labels if col_labels is not None else [str(j) for j in range(nc)]
    if annotate is None:
        annotate = nr * nc <= 64
    lo, hi = float(G.min()), float(G.max())
    span = hi - lo or 1.0
    left = 14 + 7 * max((len(s) for s in row_labels), default=1)
    top = 44
    width = left + nc * cell + 20
    height = top + nr * cell + 44
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<text x="{left}" y="16" font-size="13">{escape(title)}</text>',
    ]
    for j, lab in enumerate(col_labels):
        out.append(f'<text x="{left + j * cell + cell / 2:g}" y="{top - 6}" text-anchor="middle">{escape(lab)}</text>')
    for i, lab in enumerate(row_labels):
        y = top + i * cell
        out.append(f'<text x="{left - 6}" y="{y + cell / 2 + 4:g}" text-anchor="end">{escape(lab)}</text>')
        for j in range(nc):
            v = G[i, j]
            out.append(
                f'<rect x="{left + j * cell}" y="{y}" width="{cell}" height="{cell}" fill="{_ramp((v - lo) / span)}" stroke="#999" stroke-width="0.5"><title>{v:.6g}</title></rect>'
            )
            if annotate:
                out.append(f'<text x="{left + j * cell + cell / 2:g}" y="{y + cell / 2 + 4:g}" text-anchor="middle" font-size="9">{v:.3g}</text>')
    yb = top + nr * cell + 18
    out.append(f'<text x="{left}" y="{yb}">min {lo:.6g}   max {hi:.6g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
