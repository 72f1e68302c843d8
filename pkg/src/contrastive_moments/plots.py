"""Self-contained SVG figures (no plotting library needed)."""

from __future__ import annotations

import math
from html import escape

# A short viridis-like ramp, interpolated linearly.
_RAMP = [
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
]
_LINE_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"]


def _color(v: float, lo: float, hi: float) -> str:
    if not math.isfinite(v):
        return "#dddddd"
    x = 0.0 if hi <= lo else min(1.0, max(0.0, (v - lo) / (hi - lo)))
    pos = x * (len(_RAMP) - 1)
    i = min(int(pos), len(_RAMP) - 2)
    f = pos - i
    rgb = [round(c0 + f * (c1 - c0)) for c0, c1 in zip(_RAMP[i], _RAMP[i + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _fmt(v: float) -> str:
    return f"{v:.3g}"


def heatmap_svg(xs, ys, values, title="", xlabel="a", ylabel="b", vmin=0.0, vmax=1.0) -> str:
    """Heatmap with ``values[(x, y)]``; missing cells are left blank."""
    xs, ys = list(xs), list(ys)
    cell = 22
    left, top, right, bottom = 60, 40, 90, 50
    w = left + cell * len(xs) + right
    h = top + cell * len(ys) + bottom
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'font-family="sans-serif" font-size="10">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<text x="{w / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
    ]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            if (x, y) not in values:
                continue
            v = values[(x, y)]
            px = left + i * cell
            py = top + (len(ys) - 1 - j) * cell
            out.append(
                f'<rect x="{px}" y="{py}" width="{cell}" height="{cell}" fill="{_color(v, vmin, vmax)}">'
                f"<title>{escape(xlabel)}={_fmt(x)} {escape(ylabel)}={_fmt(y)}: {_fmt(v)}</title></rect>"
            )
    for i, x in enumerate(xs):
        if i % 2 == 0:
            out.append(
                f'<text x="{left + i * cell + cell / 2}" y="{top + len(ys) * cell + 14}" '
                f'text-anchor="middle">{_fmt(x)}</text>'
            )
    for j, y in enumerate(ys):
        if j % 2 == 0:
            out.append(
                f'<text x="{left - 4}" y="{top + (len(ys) - 1 - j) * cell + cell / 2 + 3}" '
                f'text-anchor="end">{_fmt(y)}</text>'
            )
    out.append(
        f'<text x="{left + len(xs) * cell / 2}" y="{h - 12}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="14" y="{top + len(ys) * cell / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {top + len(ys) * cell / 2})">{escape(ylabel)}</text>'
    )
    # colour bar
    bx = left + len(xs) * cell + 25
    bh = len(ys) * cell
    steps = 40
    for k in range(steps):
        v = vmin + (vmax - vmin) * (k + 0.5) / steps
        y = top + bh - (k + 1) * bh / steps
        out.append(
            f'<rect x="{bx}" y="{y:.2f}" width="14" height="{bh / steps + 0.5:.2f}" fill="{_color(v, vmin, vmax)}"/>'
        )
    out.append(f'<text x="{bx + 18}" y="{top + bh}">{_fmt(vmin)}</text>')
    out.append(f'<text x="{bx + 18}" y="{top + 8}">{_fmt(vmax)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def line_svg(series: dict, title="", xlabel="", ylabel="", logy=False) -> str:
    """Line plot; ``series`` maps a label to ``(xs, ys)``."""
    pts = [(x, y) for xs, ys in series.values() for x, y in zip(xs, ys) if math.isfinite(y)]
    w, h = 520, 340
    left, top, right, bottom = 60, 40, 130, 50
    pw, ph = w - left - right, h - top - bottom
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        ys_all = [p[1] for p in pts]
        y0, y1 = min(0.0, min(ys_all)), max(ys_all)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'font-family="sans-serif" font-size="10">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<text x="{left + pw / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{sx(xv):.1f}" y="{top + ph + 14}" text-anchor="middle">{_fmt(xv)}</text>')
        out.append(f'<text x="{left - 4}" y="{sy(yv) + 3:.1f}" text-anchor="end">{_fmt(yv)}</text>')
    for idx, (label, (xs, ys)) in enumerate(series.items()):
        color = _LINE_COLORS[idx % len(_LINE_COLORS)]
        good = [(x, y) for x, y in zip(xs, ys) if math.isfinite(y)]
        if good:
            path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in good)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.8"/>')
            for x, y in good:
                out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="{color}"/>')
        ly = top + 14 * idx + 6
        out.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 28}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 32}" y="{ly + 3}">{escape(label)}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{h - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {top + ph / 2})">{escape(ylabel)}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
