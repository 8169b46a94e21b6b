"""Minimal SVG plot writer.

This module renders the run and sweep plots: line plots of monitored
quantities, heatmaps of 2D fields and the categorical agreement heatmap of
a sweep. Output is a single self-contained SVG document whose bytes depend
only on the input data.
"""

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

# Fill colors per agreement class of a sweep cell.
CATEGORY_COLORS = {
    "agree": "#2ca02c",
    "anomaly": "#d62728",
    "no_guarantee_bounded": "#1f77b4",
    "consistent_unbounded": "#ff7f0e",
    "failed": "#7f7f7f",
}

_MARGIN = (70.0, 20.0, 40.0, 50.0)  # left, right, top, bottom


def _num(value: float) -> str:
    return f"{value:.2f}"


class SvgCanvas:
    """Accumulates SVG elements and writes them as one document.

    Example:
        >>> canvas = SvgCanvas(200, 100)
        >>> canvas.polyline([(0, 0), (10, 10)])
        >>> canvas.render().startswith("<?xml")
        True
    """

    def __init__(self, width: float, height: float) -> None:
        self.width = width
        self.height = height
        self.commands: list[str] = []

    def rect(
        self,
        x: float,
        y: float,
        width: float,
        height: float,
        fill: str = "none",
        stroke: str = "none",
    ) -> None:
        self.commands.append(
            f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(width)}" height="{_num(height)}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def line(self, x1: float, y1: float, x2: float, y2: float, color: str = "#000000") -> None:
        self.commands.append(
            f'<line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
            f'stroke="{color}" stroke-width="1"/>'
        )

    def polyline(
        self, points: Sequence[tuple[float, float]], color: str = "#000000", width: float = 1.5
    ) -> None:
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in points)
        self.commands.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_num(width)}"/>'
        )

    def text(
        self,
        x: float,
        y: float,
        content: str,
        size: int = 11,
        anchor: str = "start",
        color: str = "#333333",
    ) -> None:
        self.commands.append(
            f'<text x="{_num(x)}" y="{_num(y)}" font-family="monospace" font-size="{size}" '
            f'text-anchor="{anchor}" fill="{color}">{escape(content)}</text>'
        )

    def render(self) -> str:
        header = (
            '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_num(self.width)}" height="{_num(self.height)}" '
            f'viewBox="0 0 {_num(self.width)} {_num(self.height)}">\n'
        )
        background = (
            f'<rect x="0" y="0" width="{_num(self.width)}" height="{_num(self.height)}" '
            'fill="#ffffff"/>\n'
        )
        return header + background + "".join(item + "\n" for item in self.commands) + "</svg>\n"

    def save(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(), encoding="utf-8")
        logger.debug(f"Wrote {path}")
        return path


def _span(values: npt.NDArray[np.float64]) -> tuple[float, float]:
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return 0.0, 1.0
    lo, hi = float(finite.min()), float(finite.max())
    if hi - lo <= 1e-300 * max(1.0, abs(hi)):
        pad = 0.5 * max(abs(hi), 1.0)
        return lo - pad, hi + pad
    return lo, hi


def line_plot(
    series: Mapping[str, tuple[Sequence[float], Sequence[float]]],
    path: Path | str,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: float = 640.0,
    height: float = 400.0,
) -> Path:
    """Plot named (x, y) series sharing one pair of axes.

    Args:
        series: Label to (x values, y values)
        path: Output file
        title: Plot title
        xlabel: Label of the horizontal axis
        ylabel: Label of the vertical axis
        width: Canvas width in pixels
        height: Canvas height in pixels

    Returns:
        Path of the written file
    """
    left, right, top, bottom = _MARGIN
    canvas = SvgCanvas(width, height)
    inner_w = width - left - right
    inner_h = height - top - bottom

    xs = [np.asarray(x, dtype=np.float64) for x, _ in series.values()]
    ys = [np.asarray(y, dtype=np.float64) for _, y in series.values()]
    x_lo, x_hi = _span(np.concatenate(xs)) if xs else (0.0, 1.0)
    y_lo, y_hi = _span(np.concatenate(ys)) if ys else (0.0, 1.0)

    def to_px(x: float, y: float) -> tuple[float, float]:
        px = left + (x - x_lo) / (x_hi - x_lo) * inner_w
        py = top + inner_h - (y - y_lo) / (y_hi - y_lo) * inner_h
        return px, py

    canvas.rect(left, top, inner_w, inner_h, stroke="#000000")
    canvas.text(left, height - 8, f"{x_lo:.4g}", size=10)
    canvas.text(left + inner_w, height - 8, f"{x_hi:.4g}", size=10, anchor="end")
    canvas.text(left - 4, top + inner_h, f"{y_lo:.4g}", size=10, anchor="end")
    canvas.text(left - 4, top + 10, f"{y_hi:.4g}", size=10, anchor="end")
    if title:
        canvas.text(width / 2, top - 16, title, size=13, anchor="middle")
    if xlabel:
        canvas.text(left + inner_w / 2, height - 8, xlabel, anchor="middle")
    if ylabel:
        canvas.text(8, top - 16, ylabel)

    for index, (label, x, y) in enumerate(zip(series, xs, ys, strict=True)):
        color = PALETTE[index % len(PALETTE)]
        keep = np.isfinite(x) & np.isfinite(y)
        points = [to_px(float(a), float(b)) for a, b in zip(x[keep], y[keep], strict=True)]
        if points:
            canvas.polyline(points, color=color)
        canvas.text(left + inner_w - 4, top + 14 + 14 * index, label, anchor="end", color=color)

    return canvas.save(path)


def _ramp(fraction: float) -> str:
    """White to dark blue."""
    fraction = min(max(fraction, 0.0), 1.0)
    r = int(round(255 - fraction * (255 - 8)))
    g = int(round(255 - fraction * (255 - 48)))
    b = int(round(255 - fraction * (255 - 107)))
    return f"#{r:02x}{g:02x}{b:02x}"


def field_heatmap(
    values: npt.ArrayLike,
    path: Path | str,
    title: str = "",
    cell_px: float = 6.0,
) -> Path:
    """Heatmap of a 2D field, axis 0 horizontal and axis 1 upward."""
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 2:
        raise ValueError(f"field_heatmap needs a 2D array, got shape {array.shape}")
    nx, ny = array.shape
    left, right, top, bottom = _MARGIN
    width = left + right + nx * cell_px
    height = top + bottom + ny * cell_px
    canvas = SvgCanvas(width, height)

    lo, hi = _span(array)
    for i in range(nx):
        for j in range(ny):
            fraction = (array[i, j] - lo) / (hi - lo)
            y = top + (ny - 1 - j) * cell_px
            canvas.rect(left + i * cell_px, y, cell_px, cell_px, fill=_ramp(fraction))

    canvas.rect(left, top, nx * cell_px, ny * cell_px, stroke="#000000")
    canvas.text(left, height - 16, f"min {lo:.4g}  max {hi:.4g}", size=10)
    if title:
        canvas.text(width / 2, top - 16, title, size=13, anchor="middle")
    return canvas.save(path)


def category_heatmap(
    cells: Mapping[tuple[str, str], str],
    x_values: Sequence[str],
    y_values: Sequence[str],
    path: Path | str,
    xlabel: str = "",
    ylabel: str = "",
    colors: Mapping[str, str] = CATEGORY_COLORS,
    cell_px: float = 48.0,
) -> Path:
    """Grid of colored cells keyed by (x value, y value) with a legend.

    Args:
        cells: Category per (x, y) pair; missing pairs stay blank
        x_values: Column labels, left to right
        y_values: Row labels, bottom to top
        path: Output file
        xlabel: Horizontal axis name
        ylabel: Vertical axis name
        colors: Fill color per category
        cell_px: Cell edge length

    Returns:
        Path of the written file
    """
    left, right, top, bottom = _MARGIN
    legend_w = 200.0
    width = left + right + legend_w + len(x_values) * cell_px
    height = max(top + bottom + len(y_values) * cell_px, top + bottom + 16 * len(colors))
    canvas = SvgCanvas(width, height)
    rows = len(y_values)

    for i, x in enumerate(x_values):
        canvas.text(left + (i + 0.5) * cell_px, top + rows * cell_px + 14, x, 10, "middle")
        for j, y in enumerate(y_values):
            category = cells.get((x, y))
            if category is None:
                continue
            fill = colors.get(category, "#ffffff")
            canvas.rect(
                left + i * cell_px,
                top + (rows - 1 - j) * cell_px,
                cell_px,
                cell_px,
                fill=fill,
                stroke="#ffffff",
            )
    for j, y in enumerate(y_values):
        canvas.text(left - 4, top + (rows - 1 - j + 0.5) * cell_px + 4, y, 10, "end")

    if xlabel:
        canvas.text(left + len(x_values) * cell_px / 2, height - 8, xlabel, anchor="middle")
    if ylabel:
        canvas.text(8, top - 16, ylabel)

    legend_x = left + len(x_values) * cell_px + 24
    for k, (category, color) in enumerate(colors.items()):
        y = top + 16 * k
        canvas.rect(legend_x, y, 10, 10, fill=color)
        canvas.text(legend_x + 16, y + 9, category, size=10)

    return canvas.save(path)
