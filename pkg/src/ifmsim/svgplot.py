"""Minimal, dependency-free SVG line plots.

Plots are a convenience for eyeballing runs; the CSV files are the
contract.  Output is deterministic: fixed canvas, fixed decimal formatting,
no timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = ["Series", "render_plot"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 70, 40, 50


@dataclass(frozen=True)
class Series:
    """One polyline; ``axis`` selects the left or right ordinate."""

    name: str
    x: Sequence[float]
    y: Sequence[float]
    axis: str = "left"


def _limits(values) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = 1.0 if hi == 0 else abs(hi) * 0.1
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _fmt(v: float) -> str:
    return format(v, ".4g")


def render_plot(
    series: Sequence[Series],
    title: str,
    xlabel: str,
    ylabel_left: str,
    ylabel_right: str | None = None,
) -> str:
    """Render series to an SVG document string (two-axis, ticks, legend)."""
    if not series:
        raise ValueError("nothing to plot")
    xs_all = [v for s in series for v in s.x]
    x_lo, x_hi = _limits(xs_all)
    axes = {"left": [v for s in series if s.axis == "left" for v in s.y]}
    right_series = [s for s in series if s.axis == "right"]
    if right_series:
        axes["right"] = [v for s in right_series for v in s.y]

    y_limits = {name: _limits(vals) for name, vals in axes.items() if vals}

    px_w = _W - _ML - _MR
    px_h = _H - _MT - _MB

    def sx(x: float) -> float:
        return _ML + (x - x_lo) / (x_hi - x_lo) * px_w

    def sy(y: float, axis: str) -> float:
        lo, hi = y_limits[axis]
        return _MT + (1.0 - (y - lo) / (hi - lo)) * px_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="22" text-anchor="middle" font-size="14">{title}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{px_w}" height="{px_h}" '
        f'fill="none" stroke="#444" stroke-width="1"/>',
    ]

    n_ticks = 5
    for i in range(n_ticks + 1):
        x = x_lo + (x_hi - x_lo) * i / n_ticks
        px = sx(x)
        out.append(
            f'<line x1="{px:.1f}" y1="{_MT + px_h}" x2="{px:.1f}" '
            f'y2="{_MT + px_h + 4}" stroke="#444"/>'
        )
        out.append(
            f'<text x="{px:.1f}" y="{_MT + px_h + 16}" text-anchor="middle">{_fmt(x)}</text>'
        )
    out.append(
        f'<text x="{_ML + px_w / 2:.1f}" y="{_H - 12}" text-anchor="middle">{xlabel}</text>'
    )

    for axis, anchor_x, label, color in (
        ("left", _ML, ylabel_left, "#1f77b4"),
        ("right", _ML + px_w, ylabel_right, "#d62728"),
    ):
        if axis not in y_limits or label is None:
            continue
        lo, hi = y_limits[axis]
        for i in range(n_ticks + 1):
            y = lo + (hi - lo) * i / n_ticks
            py = sy(y, axis)
            dx = -4 if axis == "left" else 4
            anchor = "end" if axis == "left" else "start"
            out.append(
                f'<line x1="{anchor_x}" y1="{py:.1f}" x2="{anchor_x + dx}" '
                f'y2="{py:.1f}" stroke="#444"/>'
            )
            out.append(
                f'<text x="{anchor_x + dx * 2}" y="{py + 3:.1f}" '
                f'text-anchor="{anchor}">{_fmt(y)}</text>'
            )
        rot_x = 16 if axis == "left" else _W - 10
        out.append(
            f'<text x="{rot_x}" y="{_MT + px_h / 2:.1f}" text-anchor="middle" fill="{color}" '
            f'transform="rotate(-90 {rot_x} {_MT + px_h / 2:.1f})">{label}</text>'
        )

    for idx, s in enumerate(series):
        if s.axis not in y_limits:
            continue
        color = _COLORS[idx % len(_COLORS)]
        points = " ".join(f"{sx(x):.2f},{sy(y, s.axis):.2f}" for x, y in zip(s.x, s.y))
        out.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = _MT + 14 + 16 * idx
        out.append(
            f'<line x1="{_ML + 8}" y1="{ly - 4:.1f}" x2="{_ML + 28}" y2="{ly - 4:.1f}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(f'<text x="{_ML + 34}" y="{ly}">{s.name}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
