"""Tiny deterministic SVG writers for step and point-interval plots.

Hand-rolled on purpose: output bytes depend only on the data, so report
snapshots can be compared exactly. CSV files are the canonical outputs;
these plots are convenience renderings.
"""

from __future__ import annotations

import math
from pathlib import Path

_WIDTH, _HEIGHT = 640, 400
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 160, 40, 50

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class _Canvas:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
            f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="monospace" font-size="11">',
            f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
            f'<text x="{_WIDTH / 2:.0f}" y="20" text-anchor="middle" font-size="14">{_escape(title)}</text>',
        ]

    def line(self, x1, y1, x2, y2, color="#333", width=1.0, dash: str | None = None):
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"{dash_attr}/>'
        )

    def polyline(self, points, color):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')

    def circle(self, x, y, color):
        self.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="{color}"/>')

    def text(self, x, y, content, anchor="start", color="#000"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" text-anchor="{anchor}" fill="{color}">{_escape(content)}</text>'
        )

    def save(self, path: str | Path) -> None:
        self.parts.append("</svg>")
        Path(path).write_text("\n".join(self.parts) + "\n", encoding="utf-8")


def _x_scale(lo: float, hi: float):
    span = (hi - lo) or 1.0
    inner = _WIDTH - _MARGIN_L - _MARGIN_R

    def to_px(v: float) -> float:
        return _MARGIN_L + (v - lo) / span * inner

    return to_px


def _y_scale(lo: float, hi: float):
    span = (hi - lo) or 1.0
    inner = _HEIGHT - _MARGIN_T - _MARGIN_B

    def to_px(v: float) -> float:
        return _HEIGHT - _MARGIN_B - (v - lo) / span * inner

    return to_px


def step_plot(path: str | Path, series: list[tuple[str, list[tuple[float, float]]]], title: str, xlabel: str) -> None:
    """ECDF-style step plot; each series is (name, [(x, fraction), ...])."""
    canvas = _Canvas(title)
    xs = [x for _, points in series for x, _ in points]
    if not xs:
        canvas.text(_WIDTH / 2, _HEIGHT / 2, "insufficient data", anchor="middle")
        canvas.save(path)
        return
    lo, hi = min(xs), max(xs)
    sx, sy = _x_scale(lo, hi), _y_scale(0.0, 1.0)
    canvas.line(sx(lo), sy(0), sx(hi), sy(0))
    canvas.line(sx(lo), sy(0), sx(lo), sy(1))
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        canvas.text(sx(lo) - 8, sy(frac) + 4, f"{frac:.2f}", anchor="end")
        canvas.line(sx(lo), sy(frac), sx(hi), sy(frac), color="#ddd")
    canvas.text((sx(lo) + sx(hi)) / 2, _HEIGHT - 12, xlabel, anchor="middle")
    for i, (name, points) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        previous = 0.0
        path_points = [(sx(lo), sy(0.0))]
        for x, frac in points:
            path_points.append((sx(x), sy(previous)))
            path_points.append((sx(x), sy(frac)))
            previous = frac
        path_points.append((sx(hi), sy(previous)))
        canvas.polyline(path_points, color)
        canvas.text(_WIDTH - _MARGIN_R + 10, _MARGIN_T + 16 * (i + 1), name, color=color)
    canvas.save(path)


def interval_plot(
    path: str | Path,
    rows: list[tuple[str, float, float, float]],
    title: str,
    xlabel: str,
    reference: float | None = None,
    log_x: bool = False,
) -> None:
    """Point estimates with horizontal interval bars, one labeled row each."""
    canvas = _Canvas(title)
    if not rows:
        canvas.text(_WIDTH / 2, _HEIGHT / 2, "insufficient data", anchor="middle")
        canvas.save(path)
        return
    transform = (lambda v: math.log10(v)) if log_x else (lambda v: v)
    values = [transform(v) for _, est, lo, hi in rows for v in (est, lo, hi)]
    if reference is not None:
        values.append(transform(reference))
    lo_v, hi_v = min(values), max(values)
    pad = (hi_v - lo_v or 1.0) * 0.08
    sx = _x_scale(lo_v - pad, hi_v + pad)
    row_gap = (_HEIGHT - _MARGIN_T - _MARGIN_B) / (len(rows) + 1)
    if reference is not None:
        canvas.line(sx(transform(reference)), _MARGIN_T, sx(transform(reference)), _HEIGHT - _MARGIN_B, dash="4 3")
    for i, (label, est, lo, hi) in enumerate(rows):
        y = _MARGIN_T + row_gap * (i + 1)
        canvas.line(sx(transform(lo)), y, sx(transform(hi)), y, color="#333", width=1.5)
        canvas.circle(sx(transform(est)), y, _PALETTE[0])
        canvas.text(_MARGIN_L - 8, y + 4, label, anchor="end")
        canvas.text(_WIDTH - _MARGIN_R + 10, y + 4, f"{est:.3f} [{lo:.3f}, {hi:.3f}]")
    canvas.text(_WIDTH / 2, _HEIGHT - 12, xlabel + (" (log scale)" if log_x else ""), anchor="middle")
    canvas.save(path)
