"""Minimal deterministic SVG scatter chart for two-column CSV data."""

from __future__ import annotations

import csv
import io
from typing import Sequence

__all__ = ["ChartError", "read_points", "svg_chart"]

WIDTH, HEIGHT = 800, 400
MARGIN = 50


class ChartError(ValueError):
    pass


def read_points(text: str) -> tuple[list[tuple[float, float]], tuple[str, str]]:
    """Points and axis names from CSV text with a header row.

    The first two columns are x and y; blank y cells are skipped.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ChartError("empty CSV")
    head = rows[0]
    if len(head) < 2:
        raise ChartError("CSV needs at least two columns")
    pts = []
    for n, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) < 2:
            raise ChartError(f"line {n}: expected two columns")
        if row[1].strip() == "":
            continue
        try:
            pts.append((float(row[0]), float(row[1])))
        except ValueError:
            raise ChartError(f"line {n}: non-numeric value") from None
    if not pts:
        raise ChartError("CSV has no data rows")
    return pts, (head[0], head[1])


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def svg_chart(points: Sequence[tuple[float, float]], xlabel="x", ylabel="y", title="") -> str:
    """One circle marker per point plus a step line through them."""
    if not points:
        raise ChartError("nothing to plot")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    sx = (WIDTH - 2 * MARGIN) / ((x1 - x0) or 1)
    sy = (HEIGHT - 2 * MARGIN) / ((y1 - y0) or 1)

    def px(x):
        return MARGIN + (x - x0) * sx

    def py(y):
        return HEIGHT - MARGIN - (y - y0) * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" data-x-min="{_fmt(x0)}" data-x-max="{_fmt(x1)}" '
        f'data-y-min="{_fmt(y0)}" data-y-max="{_fmt(y1)}" data-points="{len(points)}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH // 2}" y="20" text-anchor="middle">{_esc(title)}</text>')
    out.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" text-anchor="middle">{_esc(xlabel)}</text>')
    out.append(
        f'<text x="15" y="{HEIGHT // 2}" text-anchor="middle" '
        f'transform="rotate(-90 15 {HEIGHT // 2})">{_esc(ylabel)}</text>'
    )
    for v, anchor_y in ((y0, py(y0)), (y1, py(y1))):
        out.append(f'<text x="{MARGIN - 5}" y="{_fmt(anchor_y)}" text-anchor="end" '
                   f'font-size="10">{_fmt(v)}</text>')
    for v, anchor_x in ((x0, px(x0)), (x1, px(x1))):
        out.append(f'<text x="{_fmt(anchor_x)}" y="{HEIGHT - MARGIN + 14}" text-anchor="middle" '
                   f'font-size="10">{_fmt(v)}</text>')

    steps = []
    for i, (x, y) in enumerate(points):
        if i:
            steps.append(f"{_fmt(px(x))},{_fmt(py(points[i - 1][1]))}")
        steps.append(f"{_fmt(px(x))},{_fmt(py(y))}")
    out.append(f'<polyline fill="none" stroke="#9ab" points="{" ".join(steps)}"/>')
    for x, y in points:
        out.append(f'<circle class="marker" cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="2" fill="#246"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
