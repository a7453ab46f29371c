"""Matplotlib rendering of scenes (PNG, PDF or SVG chosen by file suffix).

Uses a bare ``Figure`` with the Agg canvas, so no GUI backend or pyplot
state is involved.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .errors import EmptyScene
from .scenes import PlotScene


def figure_for(scene: PlotScene) -> Figure:
    if not scene.polylines and not scene.points:
        raise EmptyScene("scene has no polylines and no points")
    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot()
    for label, p0, p1 in scene.guides:
        ax.plot([float(p0[0]), float(p1[0])], [float(p0[1]), float(p1[1])],
                linestyle="--", color="0.6", linewidth=0.8, label=label)
    for label, pts in scene.polylines:
        ax.plot([float(x) for x, _ in pts], [float(y) for _, y in pts], linewidth=1.2, label=label)
    for label, (x, y) in scene.points:
        ax.plot([float(x)], [float(y)], "o", color="black", markersize=3)
        ax.annotate(label, (float(x), float(y)), textcoords="offset points", xytext=(0, 5),
                    ha="center", fontsize=7)
    xmin, xmax, ymin, ymax = (float(v) for v in scene.viewport)
    ax.set_xlim(xmin, xmax)
    ax.set_ylim(ymin, ymax)
    ax.axhline(0, color="black", linewidth=0.5)
    ax.axvline(0, color="black", linewidth=0.5)
    ax.set_title(scene.title)
    if scene.polylines:
        ax.legend(fontsize=7, loc="best")
    return fig


def save_figure(scene: PlotScene, path) -> Path:
    path = Path(path)
    fig = figure_for(scene)
    suffix = path.suffix.lower().lstrip(".") or "png"
    # strip timestamps so repeated runs write the same bytes
    metadata = {"Date": None} if suffix in ("svg", "pdf") else {"Software": None}
    if suffix == "pdf":
        metadata["CreationDate"] = None
        del metadata["Date"]
    with matplotlib.rc_context({"svg.hashsalt": "infinitesimals"}):
        fig.savefig(path, format=suffix, metadata=metadata)
    return path
