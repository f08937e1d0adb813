from .csvdata import CSV_HEADER, Curve, load_curves
from .render import PlotSpec, render, render_figure

__all__ = [
    "CSV_HEADER",
    "Curve",
    "load_curves",
    "PlotSpec",
    "render",
    "render_figure",
]
