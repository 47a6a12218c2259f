"""Spectral functional calculus for discretized Schrödinger operators H = -Δ + V,
with numerical Littlewood-Paley, maximal-function and heat-kernel checks."""

from .calculus import Kernel, apply_spectral, heat_kernel_eigen, mehler_kernel, spectral_kernel
from .dyadic import (
    BumpProfile,
    DyadicSystem,
    IndicatorProfile,
    make_reproducing_cutoff,
    make_system,
    validate_system,
)
from .grid import Grid, lp_norm, make_grid, mixed_norm
from .maximal import MaximalConfig, hl_maximal, peetre_maximal
from .operator import assemble, eigendecompose, make_potential
from .spaces import SpaceParams, sobolev_ratio, space_norm, square_function_norm

__version__ = "0.1.0"

__all__ = [
    "BumpProfile",
    "DyadicSystem",
    "Grid",
    "IndicatorProfile",
    "Kernel",
    "MaximalConfig",
    "SpaceParams",
    "apply_spectral",
    "assemble",
    "eigendecompose",
    "heat_kernel_eigen",
    "hl_maximal",
    "lp_norm",
    "make_grid",
    "make_potential",
    "make_reproducing_cutoff",
    "make_system",
    "mehler_kernel",
    "mixed_norm",
    "peetre_maximal",
    "sobolev_ratio",
    "space_norm",
    "spectral_kernel",
    "square_function_norm",
    "validate_system",
]
