"""Figure builders: render simulation CSVs into the standard layouts.

Each builder turns already-computed columns into a matplotlib Figure, one
layout per figure id: population traces (single panel or the two-panel
first/second-order comparison), coherence comparisons (purity or entropy
per labelled configuration) and the noisy-ensemble view with an intensity-
sweep inset.  Rendering never recomputes physics; the CSVs are the single
source of numerical truth.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import matplotlib
import matplotlib.pyplot as plt
import numpy as np

from .io import read_timeseries, require_columns, split_by_label

#: all time axes are in inverse zero-field-splitting units
TIME_LABEL = r"Time (units of $1/\omega_0$)"

#: sweep-series labels in ensemble comparison CSVs carry this prefix
SWEEP_PREFIX = "order-2-bath-"


@dataclass
class FigureSpec:
    """What to render: input CSVs, layout id, labels and the output stem."""

    figure: str
    csv_paths: list[str]
    output: str
    title: str | None = None
    xlabel: str = TIME_LABEL
    series_labels: dict[str, str] = field(default_factory=dict)
    sweep_prefix: str = SWEEP_PREFIX
    column: str | None = None  # for the generic single-column layout


def _display(spec: FigureSpec, label: str) -> str:
    return spec.series_labels.get(label, label)


def _series_name(spec: FigureSpec, path: str) -> str:
    base = os.path.basename(path)
    stem = base[:-4] if base.endswith(".csv") else base
    return spec.series_labels.get(stem, stem.split(".")[-1])


def build_population_overlay(spec: FigureSpec) -> matplotlib.figure.Figure:
    """Ground-level population of several runs on one axes."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for path in spec.csv_paths:
        cols = read_timeseries(path)
        require_columns(cols, ["t", "pop1"], path)
        ax.plot(cols["t"], cols["pop1"], label=_series_name(spec, path))
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(r"$|C_1|^2$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def build_population_panels(spec: FigureSpec) -> matplotlib.figure.Figure:
    """All three level populations, one panel per input run."""
    n = len(spec.csv_paths)
    fig, axes = plt.subplots(n, 1, figsize=(6.4, 3.0 * n), sharex=True)
    axes = np.atleast_1d(axes)
    panel_tags = "abcdefgh"
    for i, (ax, path) in enumerate(zip(axes, spec.csv_paths)):
        cols = read_timeseries(path)
        require_columns(cols, ["t", "pop1", "pop2", "pop3"], path)
        style = "-" if i == 0 else "--"
        for k, color in ((1, "tab:red"), (2, "tab:green"), (3, "tab:blue")):
            ax.plot(cols["t"], cols[f"pop{k}"], style, color=color,
                    label=rf"$|C_{k}|^2$")
        ax.set_ylabel("population")
        ax.set_ylim(-0.02, 1.02)
        ax.legend(loc="center right", fontsize=8)
        ax.text(0.01, 0.9, f"({panel_tags[i]}) {_series_name(spec, path)}",
                transform=ax.transAxes)
    axes[-1].set_xlabel(spec.xlabel)
    if spec.title:
        axes[0].set_title(spec.title)
    fig.tight_layout()
    return fig


def _coherence_comparison(spec: FigureSpec, column: str,
                          ylabel: str) -> matplotlib.figure.Figure:
    if len(spec.csv_paths) != 1:
        raise ValueError(f"{spec.figure}: expected one comparison CSV, "
                         f"got {len(spec.csv_paths)}")
    path = spec.csv_paths[0]
    cols = read_timeseries(path)
    require_columns(cols, ["t", column], path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, sub in split_by_label(cols).items():
        ax.plot(sub["t"], sub[column], label=_display(spec, label or column))
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def build_purity_comparison(spec: FigureSpec) -> matplotlib.figure.Figure:
    return _coherence_comparison(spec, "purity", "purity")


def build_entropy_comparison(spec: FigureSpec) -> matplotlib.figure.Figure:
    return _coherence_comparison(spec, "entropy", "entropy")


def _ensemble_with_inset(spec: FigureSpec, column: str,
                         ylabel: str) -> matplotlib.figure.Figure:
    """Mean series with +-2 standard-error bands, main configurations on the
    primary axes and the intensity-sweep labels in an inset."""
    if len(spec.csv_paths) != 1:
        raise ValueError(f"{spec.figure}: expected one ensemble CSV, "
                         f"got {len(spec.csv_paths)}")
    path = spec.csv_paths[0]
    cols = read_timeseries(path)
    require_columns(cols, ["t", column, f"std_err_{column}"], path)
    groups = split_by_label(cols)
    main = {k: v for k, v in groups.items() if not str(k).startswith(spec.sweep_prefix)}
    sweep = {k: v for k, v in groups.items() if str(k).startswith(spec.sweep_prefix)}

    fig, ax = plt.subplots(figsize=(6.8, 4.6))
    for label, sub in main.items():
        line, = ax.plot(sub["t"], sub[column], label=_display(spec, label or column))
        band = 2.0 * sub[f"std_err_{column}"]
        ax.fill_between(sub["t"], sub[column] - band, sub[column] + band,
                        color=line.get_color(), alpha=0.2, linewidth=0)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(f"mean {ylabel}")
    ax.legend(loc="best", fontsize=9)
    if spec.title:
        ax.set_title(spec.title)

    fig.tight_layout()
    if sweep:
        box = ax.get_position()
        inset = fig.add_axes([box.x0 + 0.56 * box.width,
                              box.y0 + 0.12 * box.height,
                              0.38 * box.width, 0.34 * box.height])
        for label, sub in sweep.items():
            intensity = str(label)[len(spec.sweep_prefix):]
            inset.plot(sub["t"], sub[column], label=intensity)
        inset.set_title("bath intensity sweep", fontsize=8)
        inset.tick_params(labelsize=7)
        inset.legend(fontsize=6)
    return fig


def build_ensemble_purity(spec: FigureSpec) -> matplotlib.figure.Figure:
    return _ensemble_with_inset(spec, "purity", "purity")


def build_ensemble_entropy(spec: FigureSpec) -> matplotlib.figure.Figure:
    return _ensemble_with_inset(spec, "entropy", "entropy")


def build_timeseries(spec: FigureSpec) -> matplotlib.figure.Figure:
    """Generic layout: one named column from each CSV against time."""
    if not spec.column:
        raise ValueError("generic layout needs a column name")
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for path in spec.csv_paths:
        cols = read_timeseries(path)
        require_columns(cols, ["t", spec.column], path)
        for label, sub in split_by_label(cols).items():
            name = _display(spec, label) if label else _series_name(spec, path)
            ax.plot(sub["t"], sub[spec.column], label=name)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.column)
    ax.legend()
    fig.tight_layout()
    return fig


BUILDERS = {
    "fig2": build_population_overlay,
    "fig3": build_population_panels,
    "fig4": build_purity_comparison,
    "fig5": build_purity_comparison,
    "fig6": build_entropy_comparison,
    "fig7": build_ensemble_purity,
    "fig8": build_ensemble_entropy,
    "timeseries": build_timeseries,
}


def build_figure(spec: FigureSpec) -> matplotlib.figure.Figure:
    if spec.figure not in BUILDERS:
        raise ValueError(f"unknown figure id {spec.figure!r}; "
                         f"available: {', '.join(sorted(BUILDERS))}")
    if not spec.csv_paths:
        raise ValueError("no input CSVs given")
    return BUILDERS[spec.figure](spec)


def render(spec: FigureSpec) -> list[str]:
    """Write the figure as PNG and SVG next to the output stem.

    Inputs are read (and validated) before any file is created, so a bad
    CSV never leaves a partial image behind.
    """
    fig = build_figure(spec)
    stem, ext = os.path.splitext(spec.output)
    if ext.lower() in (".png", ".svg"):
        spec_output = stem
    else:
        spec_output = spec.output
    paths = []
    try:
        for fmt in ("png", "svg"):
            path = f"{spec_output}.{fmt}"
            fig.savefig(path, dpi=150)
            paths.append(path)
    finally:
        plt.close(fig)
    return paths
