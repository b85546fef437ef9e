"""Render failure-rate curves from result CSVs.

The input format is the CSV emitted by the qdistill simulation CLI.  Only
four columns are interpreted here: the grouping column (one curve per
distinct value, ``code_name`` by default), ``p`` on the x axis,
``failure_rate`` on the y axis, and — when present — ``wilson_low`` /
``wilson_high`` for confidence bands.  Everything else in the file is
carried along untouched, so the two packages share nothing but the file
format.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

X_COLUMN = "p"
Y_COLUMN = "failure_rate"
BAND_COLUMNS = ("wilson_low", "wilson_high")

# Fixed style so that identical inputs produce byte-identical vector
# output: deterministic SVG ids, no embedded creation date, and a color
# cycle that does not depend on the ambient matplotlib configuration.
_STYLE = {
    "svg.hashsalt": "lerplots",
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "axes.prop_cycle": plt.cycler(
        color=["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]
    ),
    "path.simplify": False,
}

_MARKERS = ["o", "s", "D", "^", "v", "P", "X", "*"]


@dataclass
class PlotSpec:
    """What to draw and where to put it."""

    inputs: list[str]
    out: str
    x_range: tuple[float, float] | None = None
    y_scale: str = "log"
    group: str = "code_name"
    zoom: tuple[float, float] | None = None
    title: str | None = None


@dataclass
class RenderReport:
    """Summary of a finished render, mainly for tests and CLI output."""

    out: str
    curves: dict[str, int] = field(default_factory=dict)
    zoom: tuple[float, float] | None = None


def _read_rows(path, group_col):
    """Read one CSV, checking that every referenced column exists."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise ValueError(f"{path}: empty file, no CSV header")
        for col in (group_col, X_COLUMN, Y_COLUMN):
            if col not in header:
                raise ValueError(f"{path}: required column {col!r} "
                                 f"missing from header {header}")
        has_bands = all(c in header for c in BAND_COLUMNS)
        rows = []
        for rec in reader:
            rows.append((
                rec[group_col],
                float(rec[X_COLUMN]),
                float(rec[Y_COLUMN]),
                float(rec[BAND_COLUMNS[0]]) if has_bands else None,
                float(rec[BAND_COLUMNS[1]]) if has_bands else None,
            ))
    return rows


def _collect(spec):
    rows = []
    for path in spec.inputs:
        rows.extend(_read_rows(path, spec.group))
    if not rows:
        raise ValueError("no data rows in " + ", ".join(spec.inputs))
    curves = {}
    for name, x, y, lo, hi in rows:
        curves.setdefault(name, []).append((x, y, lo, hi))
    for pts in curves.values():
        pts.sort(key=lambda t: t[0])
    # Curves in first-seen order would depend on row order inside the
    # file; sort by name so the legend is stable under reordering.
    return dict(sorted(curves.items()))


def _draw_curves(ax, curves):
    for i, (name, pts) in enumerate(curves.items()):
        xs = [t[0] for t in pts]
        ys = [t[1] for t in pts]
        marker = _MARKERS[i % len(_MARKERS)]
        style = "-" if len(pts) > 1 else "none"
        ax.plot(xs, ys, marker=marker, linestyle=style, label=name,
                markersize=5)
        if all(t[2] is not None for t in pts):
            color = ax.get_lines()[-1].get_color()
            ax.fill_between(xs, [t[2] for t in pts], [t[3] for t in pts],
                            alpha=0.18, color=color, linewidth=0)


def render(spec: PlotSpec) -> RenderReport:
    """Draw the curves described by *spec* and write the image.

    Raises ValueError before anything is written if a referenced column
    is missing or the inputs contain no data rows.
    """
    if spec.y_scale not in ("log", "linear"):
        raise ValueError(f"y_scale must be 'log' or 'linear', "
                         f"got {spec.y_scale!r}")
    if spec.zoom is not None and not spec.zoom[0] < spec.zoom[1]:
        raise ValueError(f"zoom interval is empty: {spec.zoom}")
    curves = _collect(spec)

    with plt.rc_context(_STYLE):
        if spec.zoom is not None:
            fig, (ax, ax_zoom) = plt.subplots(
                2, 1, figsize=(6.4, 7.2),
                gridspec_kw={"height_ratios": [2.2, 1.0]})
        else:
            fig, ax = plt.subplots(figsize=(6.4, 4.8))
            ax_zoom = None

        _draw_curves(ax, curves)
        ax.set_yscale(spec.y_scale)
        if spec.x_range is not None:
            ax.set_xlim(*spec.x_range)
        ax.set_xlabel("physical error probability")
        ax.set_ylabel("failure rate")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        if spec.title:
            ax.set_title(spec.title)

        if ax_zoom is not None:
            lo, hi = spec.zoom
            zoomed = {
                name: [t for t in pts if lo <= t[0] <= hi]
                for name, pts in curves.items()
            }
            zoomed = {n: p for n, p in zoomed.items() if p}
            _draw_curves(ax_zoom, zoomed)
            ax_zoom.set_xlim(lo, hi)
            ax_zoom.set_yscale(spec.y_scale)
            ax_zoom.set_xlabel("physical error probability")
            ax_zoom.set_ylabel("failure rate")
            ax_zoom.grid(True, which="both", alpha=0.3)
            ax_zoom.set_title(f"zoom: [{lo:g}, {hi:g}]", fontsize=9)

        fig.tight_layout()
        metadata = {"Date": None} if spec.out.endswith(".svg") else None
        fig.savefig(spec.out, metadata=metadata)
        plt.close(fig)

    return RenderReport(
        out=os.path.abspath(spec.out),
        curves={name: len(pts) for name, pts in curves.items()},
        zoom=spec.zoom,
    )
