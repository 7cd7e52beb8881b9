"""Minimal self-contained SVG rendering for the figure series.

The CSV series are the authoritative artifacts; these renderings are a
convenience, so the drawing stays deliberately simple: linear axes, tick
labels, scatter dots, overlay polylines, and an optional side histogram.
"""

from __future__ import annotations

import math

from .census import FigureSeries

__all__ = ["render_figure"]

_CURVE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
_MARGIN_L = 64
_MARGIN_R = 16
_MARGIN_T = 20
_MARGIN_B = 48


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _bounds(values, pad=0.05):
    lo, hi = min(values), max(values)
    if hi == lo:
        lo -= 0.5
        hi += 0.5
    span = hi - lo
    return lo - pad * span, hi + pad * span


def render_figure(fig: FigureSeries, width: int = 640, height: int = 440) -> str:
    """Render one figure series to an SVG document string."""
    xs = list(fig.scatter_x)
    ys = list(fig.scatter_y)
    for curve in fig.curves:
        xs.extend(curve.x)
        ys.extend(curve.y)
    if not xs:
        raise ValueError("render_figure: nothing to draw")
    hist_w = 90 if fig.hist_counts else 0
    plot_w = width - _MARGIN_L - _MARGIN_R - hist_w
    plot_h = height - _MARGIN_T - _MARGIN_B
    x_lo, x_hi = _bounds(xs)
    y_lo, y_hi = _bounds(ys)

    def px(x):
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    for t in _nice_ticks(x_lo, x_hi):
        x = px(t)
        parts.append(
            f'<line x1="{x:.1f}" y1="{_MARGIN_T + plot_h}" x2="{x:.1f}" '
            f'y2="{_MARGIN_T + plot_h + 4}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{_MARGIN_T + plot_h + 16}" font-size="10" '
            f'text-anchor="middle">{t:g}</text>'
        )
    for t in _nice_ticks(y_lo, y_hi):
        y = py(t)
        parts.append(
            f'<line x1="{_MARGIN_L - 4}" y1="{y:.1f}" x2="{_MARGIN_L}" y2="{y:.1f}" '
            'stroke="black"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 6}" y="{y + 3:.1f}" font-size="10" '
            f'text-anchor="end">{t:g}</text>'
        )
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{height - 12}" font-size="12" '
        f'text-anchor="middle">{fig.xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{_MARGIN_T + plot_h / 2:.1f}" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 14 {_MARGIN_T + plot_h / 2:.1f})">'
        f"{fig.ylabel}</text>"
    )
    for ci, curve in enumerate(fig.curves):
        color = _CURVE_COLORS[ci % len(_CURVE_COLORS)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(curve.x, curve.y))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L + plot_w - 6}" y="{_MARGIN_T + 14 + 14 * ci}" '
            f'font-size="11" text-anchor="end" fill="{color}">{curve.label}</text>'
        )
    for x, y in zip(fig.scatter_x, fig.scatter_y):
        parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2" fill="#333333"/>')
    if fig.hist_counts:
        max_count = max(fig.hist_counts) or 1
        base_x = _MARGIN_L + plot_w + 6
        for count, lo, hi in zip(fig.hist_counts, fig.hist_edges, fig.hist_edges[1:]):
            if count == 0:
                continue
            top = py(min(hi, y_hi))
            bottom = py(max(lo, y_lo))
            bar = (hist_w - 12) * count / max_count
            parts.append(
                f'<rect x="{base_x}" y="{top:.2f}" width="{bar:.2f}" '
                f'height="{max(bottom - top, 1.0):.2f}" fill="#87aade" stroke="none"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
