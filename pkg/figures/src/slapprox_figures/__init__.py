"""Figure rendering for the measurement harness's CSV outputs."""

from .render import (
    EmptyInputError,
    FigureSpec,
    KINDS,
    SchemaError,
    render,
    render_density_overlay,
    render_distance_curve,
    render_multiproduct_bars,
)

__all__ = [
    "EmptyInputError",
    "FigureSpec",
    "KINDS",
    "SchemaError",
    "render",
    "render_density_overlay",
    "render_distance_curve",
    "render_multiproduct_bars",
]
