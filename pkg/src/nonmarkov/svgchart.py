"""Minimal static SVG line charts, with no plotting dependency.

Linear axes, tick labels, a color cycle and a legend box: just enough to
eyeball the CSV output.  Charts are single self-contained <svg> documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["Series", "render_chart", "write_chart"]

_COLORS = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
)

_MARGIN_LEFT = 64.0
_MARGIN_RIGHT = 16.0
_MARGIN_TOP = 28.0
_MARGIN_BOTTOM = 46.0


@dataclass(frozen=True)
class Series:
    """One labelled polyline."""

    label: str
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have equal length")
        if len(self.x) < 2:
            raise ValueError("a series needs at least two points")


def _nice_ticks(lo: float, hi: float, target: int = 6):
    """Tick positions at a 1/2/5 x 10^k step covering [lo, hi]."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _fmt(v: float) -> str:
    out = f"{v:.6g}"
    return "0" if out == "-0" else out


def render_chart(
    series: Sequence[Series],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: float = 720.0,
    height: float = 480.0,
) -> str:
    """Render labelled series as a self-contained SVG document string."""
    if not series:
        raise ValueError("nothing to plot")
    x_lo = min(float(np.min(s.x)) for s in series)
    x_hi = max(float(np.max(s.x)) for s in series)
    y_lo = min(float(np.min(s.y)) for s in series)
    y_hi = max(float(np.max(s.y)) for s in series)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi += 0.5
        y_lo -= 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    px0, px1 = _MARGIN_LEFT, width - _MARGIN_RIGHT
    py0, py1 = height - _MARGIN_BOTTOM, _MARGIN_TOP

    def sx(v: float) -> float:
        return px0 + (v - x_lo) / (x_hi - x_lo) * (px1 - px0)

    def sy(v: float) -> float:
        return py0 + (v - y_lo) / (y_hi - y_lo) * (py1 - py0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" '
        f'height="{height:g}" viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
        '<g font-family="sans-serif" font-size="12" fill="black">',
    ]
    if title:
        parts.append(
            f'<text x="{(px0 + px1) / 2:.1f}" y="18" text-anchor="middle" '
            f'font-size="14">{escape(title)}</text>'
        )

    for v in _nice_ticks(x_lo, x_hi):
        x = sx(v)
        parts.append(
            f'<line x1="{x:.2f}" y1="{py0:.2f}" x2="{x:.2f}" '
            f'y2="{py0 + 5:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{py0 + 18:.2f}" '
            f'text-anchor="middle">{escape(_fmt(v))}</text>'
        )
    for v in _nice_ticks(y_lo, y_hi):
        y = sy(v)
        parts.append(
            f'<line x1="{px0 - 5:.2f}" y1="{y:.2f}" x2="{px0:.2f}" '
            f'y2="{y:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px0 - 8:.2f}" y="{y + 4:.2f}" '
            f'text-anchor="end">{escape(_fmt(v))}</text>'
        )
    parts.append(
        f'<rect x="{px0:.2f}" y="{py1:.2f}" width="{px1 - px0:.2f}" '
        f'height="{py0 - py1:.2f}" fill="none" stroke="black"/>'
    )
    if x_label:
        parts.append(
            f'<text x="{(px0 + px1) / 2:.1f}" y="{height - 10:.1f}" '
            f'text-anchor="middle">{escape(x_label)}</text>'
        )
    if y_label:
        x = 16.0
        y = (py0 + py1) / 2
        parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 {x:.1f} {y:.1f})">{escape(y_label)}</text>'
        )

    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(
            f"{sx(float(xv)):.2f},{sy(float(yv)):.2f}"
            for xv, yv in zip(s.x, s.y)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.5"/>'
        )

    lx = px1 - 150.0
    ly = py1 + 10.0
    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        y = ly + 16.0 * i
        parts.append(
            f'<line x1="{lx:.1f}" y1="{y:.1f}" x2="{lx + 22:.1f}" '
            f'y2="{y:.1f}" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 28:.1f}" y="{y + 4:.1f}">{escape(s.label)}</text>'
        )

    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_chart(path, series, **kwargs) -> None:
    """Render and write a chart with LF line endings."""
    svg = render_chart(series, **kwargs)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(svg)
