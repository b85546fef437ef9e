"""Plotting companion for qdistill result CSVs."""

from .plotting import PlotSpec, RenderReport, render

__all__ = ["PlotSpec", "RenderReport", "render"]
__version__ = "0.1.0"
