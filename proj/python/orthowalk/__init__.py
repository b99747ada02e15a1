"""Uniform sampling of weighted 3D lattice walks confined to the first orthant."""

from ._core import (
    OrthowalkError,
    analyze,
    convex_hull,
    count_meanders,
    count_orthant_walks,
    naive,
    sample,
    verify,
)

__all__ = [
    "OrthowalkError",
    "analyze",
    "convex_hull",
    "count_meanders",
    "count_orthant_walks",
    "naive",
    "sample",
    "verify",
]
