"""Figure scripts for bisbm benchmark outputs."""

from .render import (
    FigureInputError,
    FigureSpec,
    build_adjacency_figure,
    build_hist_figure,
    build_sweep_figure,
    render,
)

__all__ = [
    "FigureInputError",
    "FigureSpec",
    "build_adjacency_figure",
    "build_hist_figure",
    "build_sweep_figure",
    "render",
]
