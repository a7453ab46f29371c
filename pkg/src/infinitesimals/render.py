"""Byte-stable SVG and CSV output for scenes.

Numbers are written with 15 significant digits and elements always appear
in the same order (background, title, axes, guides, polylines, points,
legend), so identical scenes give identical bytes.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from .errors import EmptyScene
from .scenes import PlotScene

WIDTH, HEIGHT, MARGIN = 640, 480, 48
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")


def fmt(v) -> str:
    return format(float(v), ".15g")


class _Frame:
    def __init__(self, viewport):
        self.xmin, self.xmax, self.ymin, self.ymax = (float(v) for v in viewport)

    def x(self, v) -> str:
        t = (float(v) - self.xmin) / (self.xmax - self.xmin)
        return fmt(MARGIN + t * (WIDTH - 2 * MARGIN))

    def y(self, v) -> str:
        t = (float(v) - self.ymin) / (self.ymax - self.ymin)
        return fmt(HEIGHT - MARGIN - t * (HEIGHT - 2 * MARGIN))


def _svg(scene: PlotScene) -> str:
    f = _Frame(scene.viewport)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="{MARGIN // 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(scene.title)}</text>',
    ]

    # axes sit at 0 when 0 is in view, otherwise along the viewport edge
    ax_y = 0.0 if f.ymin <= 0 <= f.ymax else f.ymin
    ax_x = 0.0 if f.xmin <= 0 <= f.xmax else f.xmin
    out.append('<g class="axes" stroke="black" stroke-width="1">')
    out.append(f'<line x1="{f.x(f.xmin)}" y1="{f.y(ax_y)}" x2="{f.x(f.xmax)}" y2="{f.y(ax_y)}"/>')
    out.append(f'<line x1="{f.x(ax_x)}" y1="{f.y(f.ymin)}" x2="{f.x(ax_x)}" y2="{f.y(f.ymax)}"/>')
    out.append("</g>")
    out.append('<g class="ticks" font-family="sans-serif" font-size="10" fill="black">')
    for v in (f.xmin, f.xmax):
        out.append(f'<text x="{f.x(v)}" y="{fmt(HEIGHT - MARGIN + 14)}" text-anchor="middle">{fmt(v)}</text>')
    for v in (f.ymin, f.ymax):
        out.append(f'<text x="{fmt(MARGIN - 4)}" y="{f.y(v)}" text-anchor="end">{fmt(v)}</text>')
    out.append("</g>")

    for label, p0, p1 in scene.guides:
        out.append(f'<line class="guide" data-label={quoteattr(label)} x1="{f.x(p0[0])}" y1="{f.y(p0[1])}" '
                   f'x2="{f.x(p1[0])}" y2="{f.y(p1[1])}" stroke="#999999" stroke-dasharray="4 3"/>')

    for i, (label, pts) in enumerate(scene.polylines):
        d = " ".join(f"{'M' if j == 0 else 'L'}{f.x(x)},{f.y(y)}" for j, (x, y) in enumerate(pts))
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<path class="polyline" data-label={quoteattr(label)} d="{d}" '
                   f'fill="none" stroke="{color}" stroke-width="1.5"/>')

    for label, (x, y) in scene.points:
        out.append(f'<circle class="point" data-label={quoteattr(label)} cx="{f.x(x)}" cy="{f.y(y)}" '
                   f'r="3" fill="black"/>')
        out.append(f'<text x="{f.x(x)}" y="{fmt(float(f.y(y)) - 6)}" font-family="sans-serif" '
                   f'font-size="10" text-anchor="middle">{escape(label)}</text>')

    out.append('<g class="legend" font-family="sans-serif" font-size="10">')
    for i, (label, _) in enumerate(scene.polylines):
        y = MARGIN + 12 * i
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<line x1="{WIDTH - MARGIN - 110}" y1="{y}" x2="{WIDTH - MARGIN - 95}" y2="{y}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 90}" y="{y + 3}">{escape(label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _csv_field(s: str) -> str:
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _csv(scene: PlotScene) -> str:
    rows = ["label,x,y"]
    for label, pts in scene.polylines:
        rows.extend(f"{_csv_field(label)},{x},{y}" for x, y in pts)
    for label, (x, y) in scene.points:
        rows.append(f"{_csv_field(label)},{x},{y}")
    return "\n".join(rows) + "\n"


def render(scene: PlotScene, format: str = "svg") -> bytes:
    """SVG 1.1 or CSV bytes. CSV coordinates are exact (rationals print as p/q)."""
    if not scene.polylines and not scene.points:
        raise EmptyScene("scene has no polylines and no points")
    kind = format.lower()
    if kind == "svg":
        return _svg(scene).encode("utf-8")
    if kind == "csv":
        return _csv(scene).encode("utf-8")
    raise ValueError(f"unknown render format {format!r}; use svg or csv")
