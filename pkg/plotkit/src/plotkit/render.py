"""Panel rendering for acceptance-ratio curves.

One axes per input CSV; within an axes, one line per algorithm with a
matching legend entry.  Output is deterministic for fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .csvdata import load_curves

_MARKERS = ("o", "s", "^", "D", "v", "P", "X", "*")


@dataclass(frozen=True)
class PlotSpec:
    csv_paths: tuple[str, ...]
    out_path: str
    panel_titles: tuple[str, ...] = ()
    dpi: int = 150
    ncols: int = 2

    def __post_init__(self):
        if not self.csv_paths:
            raise ValueError("at least one CSV path is required")
        if self.panel_titles and len(self.panel_titles) != len(self.csv_paths):
            raise ValueError("panel_titles must match csv_paths in length")
        if self.dpi < 1 or self.ncols < 1:
            raise ValueError("dpi and ncols must be positive")


def render_figure(spec: PlotSpec):
    """Build the figure without writing it; render() saves the result."""
    n = len(spec.csv_paths)
    ncols = min(spec.ncols, n)
    nrows = -(-n // ncols)
    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(4.5 * ncols, 3.2 * nrows))
    flat = [ax for row in axes for ax in row]
    for ax in flat[n:]:
        ax.set_visible(False)
    for i, (ax, path) in enumerate(zip(flat, spec.csv_paths)):
        curves = load_curves(path)
        for j, curve in enumerate(curves):
            us = [p[0] for p in curve.points]
            rs = [p[1] for p in curve.points]
            ax.plot(us, rs, marker=_MARKERS[j % len(_MARKERS)],
                    markersize=4, linewidth=1.2, label=curve.algorithm)
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 1.0)
        ax.set_xlabel("utilization")
        ax.set_ylabel("acceptance ratio")
        ax.grid(True, linewidth=0.3, alpha=0.5)
        if spec.panel_titles:
            ax.set_title(spec.panel_titles[i])
        if curves:
            ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> str:
    """Render all panels and write the image; returns the output path."""
    fig = render_figure(spec)
    try:
        fig.savefig(spec.out_path, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.out_path
