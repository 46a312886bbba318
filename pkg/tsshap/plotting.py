""" Deterministic SVG rendering of forecast overlays, importance bar charts and dependence curves """

import dataclasses
import io
from typing import Optional, Sequence, Tuple

import numpy as np
import matplotlib
from matplotlib.figure import Figure

from . import exceptions

import logging
log = logging.getLogger(__name__)

# Renders of the same plot are byte identical
SVG_RC = {
    "svg.hashsalt": "tsshap",
    "svg.fonttype": "none",
}

@dataclasses.dataclass(frozen=True)
class Line:
    label: str
    x: Sequence[float]
    y: Sequence[float]

@dataclasses.dataclass(frozen=True)
class PlotSpec:
    """ A plot to render

    Args:
        kind: "lines" for line plots (forecast overlays, dependence curves) or "bars" for importance charts
        title: The plot title
        xlabel: The x axis label
        ylabel: The y axis label
        lines: The labelled polylines of a line plot
        labels: The bar labels of a bar chart
        values: The bar heights of a bar chart
        marker: Vertical marker position (e.g. a split threshold or the forecast origin)
    """
    kind: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    lines: Tuple[Line, ...] = ()
    labels: Tuple[str, ...] = ()
    values: Tuple[float, ...] = ()
    marker: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("lines", "bars"):
            raise ValueError(f"Unknown plot kind '{self.kind}' - expected lines or bars")

def _check(spec: PlotSpec):
    if spec.kind == "lines":
        if not spec.lines or not any(len(line.x) for line in spec.lines):
            raise exceptions.EmptyData(f"Line plot '{spec.title}' has no points")
        for line in spec.lines:
            if len(line.x) != len(line.y):
                raise exceptions.LengthMismatch(f"Line '{line.label}' has {len(line.x)} x and {len(line.y)} y values")
            if not (np.all(np.isfinite(line.x)) and np.all(np.isfinite(line.y))):
                raise ValueError(f"Line '{line.label}' contains non finite values")
    else:
        if not len(spec.values):
            raise exceptions.EmptyData(f"Bar chart '{spec.title}' has no bars")
        if len(spec.labels) != len(spec.values):
            raise exceptions.LengthMismatch(f"{len(spec.labels)} labels were given for {len(spec.values)} bars")
        if not np.all(np.isfinite(spec.values)):
            raise ValueError(f"Bar chart '{spec.title}' contains non finite values")

def render_svg(spec: PlotSpec) -> str:
    """ Render a plot as a standalone SVG document with axes, labels and a legend

    Raises:
        EmptyData: There is nothing to plot
    """
    _check(spec)

    with matplotlib.rc_context(SVG_RC):
        if spec.kind == "lines":
            figure = Figure(figsize=(8, 4.5))
            axes = figure.add_subplot()
            for line in spec.lines:
                axes.plot(np.asarray(line.x, dtype=float), np.asarray(line.y, dtype=float), label=line.label, linewidth=1.2)
            if spec.marker is not None:
                axes.axvline(spec.marker, color="grey", linestyle="--", linewidth=0.8)
            axes.legend(loc="best")

        else:
            width = max(6.0, 0.4 * len(spec.values) + 2.0)
            figure = Figure(figsize=(width, 5))
            axes = figure.add_subplot()
            positions = np.arange(len(spec.values))
            values = np.asarray(spec.values, dtype=float)
            colours = ["tab:red" if value >= 0 else "tab:blue" for value in values]
            axes.bar(positions, values, color=colours, label="attribution")
            axes.set_xticks(positions)
            axes.set_xticklabels(spec.labels, rotation=45, ha="right")
            axes.axhline(0.0, color="black", linewidth=0.8)
            axes.legend(loc="best")

        axes.set_title(spec.title)
        axes.set_xlabel(spec.xlabel)
        axes.set_ylabel(spec.ylabel)
        axes.grid(True, linewidth=0.3)
        figure.tight_layout()

        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})

    return buffer.getvalue()
