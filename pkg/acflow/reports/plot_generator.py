"""
Plot generator for acflow.
Renders log-log convergence plots as SVG with reportlab graphics.
"""

import logging
import math
from typing import Dict, Sequence

from reportlab.graphics import renderSVG
from reportlab.graphics.shapes import Circle, Drawing, Line, PolyLine, Rect, String
from reportlab.lib import colors

from acflow.core.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

PLOT_STYLE = {
    "width": 480,
    "height": 360,
    "margin": 56,
    "font": "Helvetica",
    "font_size": 9,
    "series_colors": ["#1f4e79", "#c0392b", "#27ae60", "#8e44ad", "#d35400"],
    "guide_color": "#7f7f7f",
}


def _log_range(values):
    logs = [math.log10(v) for v in values]
    low, high = math.floor(min(logs)), math.ceil(max(logs))
    if high == low:
        high = low + 1
    return low, high


def build_convergence_drawing(h_values: Sequence[float], series: Dict[str, Sequence[float]],
                              title: str = "Convergence") -> Drawing:
    """Log-log drawing of each error series against h, with a slope-1 guide.

    Args:
        h_values: mesh sizes, one per level
        series: column name -> errors per level (non-positive entries are skipped)
        title: caption above the axes

    Returns:
        reportlab Drawing
    """
    if len(h_values) < 2:
        raise InvalidParameterError("a convergence plot needs at least two levels")
    if any(h <= 0 for h in h_values):
        raise InvalidParameterError("h values must be positive")

    style = PLOT_STYLE
    width, height, margin = style["width"], style["height"], style["margin"]
    positive = [e for errors in series.values() for e in errors if e is not None and e > 0]
    if not positive:
        raise InvalidParameterError("no positive errors to plot")

    x_low, x_high = _log_range(h_values)
    y_low, y_high = _log_range(positive)

    def to_x(h):
        return margin + (math.log10(h) - x_low) / (x_high - x_low) * (width - 2 * margin)

    def to_y(e):
        return margin + (math.log10(e) - y_low) / (y_high - y_low) * (height - 2 * margin)

    drawing = Drawing(width, height)
    drawing.add(Rect(margin, margin, width - 2 * margin, height - 2 * margin,
                     fillColor=None, strokeColor=colors.black, strokeWidth=0.8))

    # Decade ticks
    for k in range(x_low, x_high + 1):
        x = to_x(10.0 ** k)
        drawing.add(Line(x, margin, x, margin - 4, strokeColor=colors.black))
        drawing.add(String(x, margin - 14, f"1e{k}", fontName=style["font"],
                           fontSize=style["font_size"], textAnchor="middle"))
    for k in range(y_low, y_high + 1):
        y = to_y(10.0 ** k)
        drawing.add(Line(margin, y, margin - 4, y, strokeColor=colors.black))
        drawing.add(String(margin - 6, y - 3, f"1e{k}", fontName=style["font"],
                           fontSize=style["font_size"], textAnchor="end"))

    drawing.add(String(width / 2, height - margin / 2, title, fontName=style["font"],
                       fontSize=style["font_size"] + 3, textAnchor="middle"))
    drawing.add(String(width / 2, margin / 4, "h", fontName=style["font"],
                       fontSize=style["font_size"] + 1, textAnchor="middle"))

    legend_y = height - margin - 12
    for index, (name, errors) in enumerate(series.items()):
        color = colors.HexColor(style["series_colors"][index % len(style["series_colors"])])
        points = [(to_x(h), to_y(e)) for h, e in zip(h_values, errors) if e is not None and e > 0]
        if not points:
            continue
        if len(points) > 1:
            drawing.add(PolyLine([c for point in points for c in point], strokeColor=color, strokeWidth=1.2))
        for x, y in points:
            drawing.add(Circle(x, y, 2.5, fillColor=color, strokeColor=color))
        drawing.add(Line(width - margin - 90, legend_y, width - margin - 74, legend_y, strokeColor=color))
        drawing.add(String(width - margin - 70, legend_y - 3, name, fontName=style["font"],
                           fontSize=style["font_size"]))
        legend_y -= 12

    # Slope-1 guide anchored at the coarsest level of the first plotted series
    first = next(iter(series.values()))
    anchor = next(((h, e) for h, e in zip(h_values, first) if e is not None and e > 0), None)
    if anchor is not None:
        h0, e0 = anchor
        h1 = min(h_values)
        guide = colors.HexColor(style["guide_color"])
        drawing.add(Line(to_x(h0), to_y(e0 * 0.5), to_x(h1), to_y(e0 * 0.5 * h1 / h0),
                         strokeColor=guide, strokeDashArray=[4, 3]))
        drawing.add(String(to_x(h1), to_y(e0 * 0.5 * h1 / h0) - 12, "slope 1", fontName=style["font"],
                           fontSize=style["font_size"], fillColor=guide))
    return drawing


def generate_convergence_plot(h_values, series, output_file, title="Convergence"):
    """Write the convergence plot to an SVG file and return its path."""
    drawing = build_convergence_drawing(h_values, series, title)
    renderSVG.drawToFile(drawing, str(output_file))
    logger.info(f"Convergence plot written to {output_file}")
    return output_file
