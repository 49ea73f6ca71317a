"""Centroid scatter figures rendered to SVG files.

Points are colored by cluster label, obtained centroids drawn as filled
black circles and reference means as red triangles. Marker groups carry
stable gids ("centroid-<j>", "true-mean-<j>") so emitted files stay
machine-checkable, and the SVG output is byte-reproducible.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .clustering import Clustering
from .data import Dataset


def emit_scatter_svg(ds: Dataset, clustering: Clustering, true_means=None,
                     path="clusters.svg", project: bool = False) -> Path:
    """Render one clustering to an SVG file.

    Datasets with n = 3 are drawn as first-two-coordinate projections; other
    dimensions require project=True (same projection) and n >= 2.
    """
    if ds.n < 2:
        raise ValueError("scatter figures need at least 2 coordinates")
    if ds.n > 3 and not project:
        raise ValueError(f"n={ds.n}: pass project=True to draw the first two coordinates")
    xy = ds.points[:, :2]

    fig = Figure(figsize=(6.0, 5.0))
    ax = fig.subplots()
    colors = matplotlib.colormaps["tab10"]
    for j in range(clustering.k):
        members = xy[clustering.labels == j]
        if len(members):
            ax.scatter(members[:, 0], members[:, 1], s=12, alpha=0.6,
                       color=colors(j % 10), linewidths=0, gid=f"cluster-{j}")
    for j, c in enumerate(clustering.centroids):
        ax.scatter([c[0]], [c[1]], s=90, marker="o", color="black",
                   zorder=3, gid=f"centroid-{j}")
    if true_means is not None:
        for j, mu in enumerate(true_means):
            ax.scatter([mu[0]], [mu[1]], s=90, marker="^", color="red",
                       zorder=4, gid=f"true-mean-{j}")
    ax.set_title(ds.name)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed hashsalt + no date metadata keep the emitted bytes reproducible
    with matplotlib.rc_context({"svg.hashsalt": "seedbench"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path
