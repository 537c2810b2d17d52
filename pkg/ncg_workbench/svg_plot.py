"""
Minimal SVG line charts (γ_n and the distance bound against n).
"""

import math
from typing import Dict, List, Sequence, Tuple
from xml.sax.saxutils import escape

from .errors import DomainError, ShapeError
from .logger import get_logger

logger = get_logger('svg_plot')

PALETTE = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e')
WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 150, 40, 50
TICKS = 5


def _ticks(low: float, high: float, count: int = TICKS) -> List[float]:
    if high == low:
        return [low]
    step = (high - low) / (count - 1)
    return [low + k * step for k in range(count)]


def _fmt(value: float) -> str:
    return f"{value:.4g}"


def line_chart(series: Dict[str, Tuple[Sequence[float], Sequence[float]]], title: str = '',
               xlabel: str = 'n', ylabel: str = '', log_y: bool = False) -> str:
    """
    Render named (x, y) series as an SVG document.

    Args:
        series: name -> (xs, ys), plotted in insertion order
        log_y: Plot log10(y); every y must then be positive

    Raises:
        ShapeError: If a series has mismatched or empty coordinates
        DomainError: If log_y is set and some y <= 0
    """
    if not series:
        raise ShapeError("nothing to plot")
    points: Dict[str, List[Tuple[float, float]]] = {}
    for name, (xs, ys) in series.items():
        if len(xs) != len(ys) or not xs:
            raise ShapeError(f"series {name!r} has {len(xs)} x values and {len(ys)} y values")
        if log_y and any(y <= 0 for y in ys):
            raise DomainError(f"series {name!r} has non-positive values on a log scale")
        points[name] = [(float(x), math.log10(y) if log_y else float(y)) for x, y in zip(xs, ys)]

    all_x = [p[0] for pts in points.values() for p in pts]
    all_y = [p[1] for pts in points.values() for p in pts]
    x_low, x_high = min(all_x), max(all_x)
    y_low, y_high = min(all_y), max(all_y)
    if x_high == x_low:
        x_low, x_high = x_low - 1, x_high + 1
    if y_high == y_low:
        y_low, y_high = y_low - 1, y_high + 1

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x: float) -> float:
        return MARGIN_LEFT + (x - x_low) / (x_high - x_low) * plot_w

    def sy(y: float) -> float:
        return MARGIN_TOP + plot_h - (y - y_low) / (y_high - y_low) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP + plot_h}" x2="{MARGIN_LEFT + plot_w}" '
        f'y2="{MARGIN_TOP + plot_h}" stroke="black"/>',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{MARGIN_TOP + plot_h}" stroke="black"/>',
    ]
    for x in _ticks(x_low, x_high):
        out.append(f'<text x="{sx(x):.1f}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle">{_fmt(x)}</text>')
    for y in _ticks(y_low, y_high):
        label = _fmt(10 ** y) if log_y else _fmt(y)
        out.append(f'<line x1="{MARGIN_LEFT - 4}" y1="{sy(y):.1f}" x2="{MARGIN_LEFT}" y2="{sy(y):.1f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{sy(y) + 4:.1f}" text-anchor="end">{label}</text>')
    out.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    y_title = f"{ylabel} (log)" if log_y else ylabel
    out.append(f'<text x="16" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.1f})">{escape(y_title)}</text>')

    for k, (name, pts) in enumerate(points.items()):
        color = PALETTE[k % len(PALETTE)]
        coords = ' '.join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
        ly = MARGIN_TOP + 10 + 20 * k
        lx = WIDTH - MARGIN_RIGHT + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text>')
    out.append('</svg>')
    return '\n'.join(out) + '\n'


def write_line_chart(path: str, series: Dict[str, Tuple[Sequence[float], Sequence[float]]], **kwargs) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(line_chart(series, **kwargs))
    logger.info(f"Wrote chart {path}")
