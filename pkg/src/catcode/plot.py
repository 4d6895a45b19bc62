"""Static SVG line plots, one curve per repetition count."""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import EmptySlice
from .sweep import select

# N -> (colour, stroke width, dash pattern)
CURVE_STYLES = {
    1: ("blue", 3.0, None),
    3: ("red", 1.5, None),
    5: ("green", 1.5, "8,4"),
    11: ("black", 1.5, "2,3"),
    51: ("grey", 1.5, "8,4"),
}
_FALLBACK = ("purple", "orange", "teal", "brown", "olive")

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=90, top=30, bottom=55)
LABELS = {"p_herald": "herald probability", "f_worst": "worst-case fidelity",
          "f_codeword": "codeword overlap", "concurrence": "concurrence"}


def curve_style(n, k=0):
    if n in CURVE_STYLES:
        return CURVE_STYLES[n]
    return _FALLBACK[k % len(_FALLBACK)], 1.5, "4,2"


def _ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step - 1e-9) * step
    out = []
    t = start
    while t <= hi + 1e-9 * step:
        out.append(round(t, 10))
        t += step
    return out


def svg_text(rows, metric, eta, regime) -> str:
    curves = select(rows, metric, eta, regime)
    curves = {n: [(a, v) for a, v in pts if not math.isnan(v)] for n, pts in curves.items()}
    curves = {n: pts for n, pts in curves.items() if pts}
    if not curves:
        raise EmptySlice(f"no {metric} data for eta={eta}, regime={regime}")
    xs = [a for pts in curves.values() for a, _ in pts]
    ys = [v for pts in curves.values() for _, v in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(1.0, max(ys))
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN["top"] + (1 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle">'
           f'{escape(LABELS.get(metric, metric))}, eta = {eta:g}, {escape(str(regime))}</text>']
    # axes
    left, bottom = MARGIN["left"], HEIGHT - MARGIN["bottom"]
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{left + pw}" y2="{bottom}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{MARGIN["top"]}" x2="{left}" y2="{bottom}" stroke="black"/>')
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{bottom}" x2="{sx(t):.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{bottom + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 5}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">|alpha|</text>')
    out.append(f'<text x="18" y="{MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2:.1f})">{escape(LABELS.get(metric, metric))}</text>')
    # curves and legend
    for k, (n, pts) in enumerate(curves.items()):
        colour, width, dash = curve_style(n, k)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{sx(a):.2f},{sy(v):.2f}" for a, v in pts)
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="{width}"{dash_attr} '
                   f'points="{coords}"><title>N = {n}</title></polyline>')
        ly = MARGIN["top"] + 15 + 18 * k
        lx = left + pw + 10
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 30}" y2="{ly}" stroke="{colour}" '
                   f'stroke-width="{width}"{dash_attr}/>')
        out.append(f'<text x="{lx + 36}" y="{ly + 4}">N = {n}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(rows, metric, eta, regime, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg_text(rows, metric, eta, regime), encoding="utf-8")
    return path
