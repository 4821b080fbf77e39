"""Predicted-vs-ground-truth scatter plots written as static SVG."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from facesym.report import ScatterSeries  # noqa: E402

PAD_FRACTION = 0.05

UNITS = {"fa": "deg", "osa": "deg", "ga": "deg", "hhd": "deg", "rfs": "ratio", "td": "ratio"}
LONG_NAMES = {
    "fa": "facial angle",
    "osa": "orbit slopes angle",
    "rfs": "relative face size",
    "ga": "gaze angle",
    "hhd": "habitual head deviation",
    "td": "translational deformity",
}

_MARKERS = ("o", "^", "s", "D", "v")
_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple")

# fixed hash salt and no date metadata keep the SVG bytes reproducible
_RC = {
    "svg.hashsalt": "facesym",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def axis_limits(values: Sequence[float]) -> tuple[float, float]:
    """Shared limits for both axes: the data range padded by 5% of its width
    on each side. A zero-width range is padded by 5% of its magnitude, or by
    0.05 around zero."""
    lo, hi = min(values), max(values)
    span = hi - lo
    if span == 0.0:
        span = abs(lo) or 1.0
    return lo - PAD_FRACTION * span, hi + PAD_FRACTION * span


def scatter_figure(series: Sequence[ScatterSeries], labels: Sequence[str] = ()):
    """Build the figure for one measure; several series share the axes (for
    example predictions from two models against the same ground truth)."""
    if not series:
        raise ValueError("nothing to plot")
    name = series[0].measure_name
    values = [v for s in series for g, p, _ in s.points for v in (g, p)]
    if not values:
        raise ValueError(f"{name}: no measured pairs to plot")
    lo, hi = axis_limits(values)

    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.0, 4.0))
        ax.plot([lo, hi], [lo, hi], color="0.6", linestyle="--", linewidth=0.8, zorder=1)
        for k, s in enumerate(series):
            label = labels[k] if k < len(labels) else None
            ax.scatter(s.gt, s.pred, s=18, marker=_MARKERS[k % len(_MARKERS)],
                       color=_COLORS[k % len(_COLORS)], alpha=0.8, label=label, zorder=2)
        ax.set_xlim(lo, hi)
        ax.set_ylim(lo, hi)
        ax.set_aspect("equal", adjustable="box")
        unit = UNITS.get(name, "")
        ax.set_xlabel(f"ground truth {name} ({unit})")
        ax.set_ylabel(f"predicted {name} ({unit})")
        ax.set_title(LONG_NAMES.get(name, name))
        if any(labels):
            ax.legend(frameon=False, loc="upper left")
        fig.tight_layout()
    return fig


def write_scatter_svg(series: Sequence[ScatterSeries], path, labels: Sequence[str] = ()) -> Path:
    path = Path(path)
    fig = scatter_figure(series, labels)
    try:
        with plt.rc_context(_RC):
            fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return path
