"""Hardy-Littlewood and Peetre maximal functions on grid nodes.

Suprema over the continuum are restricted to grid nodes, a known downward
bias that is small for functions resolved by the grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .calculus import apply_spectral
from .dyadic import DyadicSystem
from .grid import Grid
from .operator import EigenDecomposition

PEETRE_ORDERS = ("star", "star_star")


@dataclass(frozen=True)
class MaximalConfig:
    """Ball radii for the discrete maximal function, increasing."""

    radii: tuple[float, ...]

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ValueError("radius set must be non-empty, positive and increasing")


def default_config(grid: Grid) -> MaximalConfig:
    """h/2 (the node alone), then h 2^m up to the box diameter 2L√n."""
    radii = [0.5 * grid.h]
    r = grid.h
    top = 2.0 * grid.L * np.sqrt(grid.n)
    while r < top:
        radii.append(r)
        r *= 2.0
    radii.append(top)
    return MaximalConfig(tuple(radii))


def hl_maximal(f, grid: Grid, cfg: MaximalConfig | None = None) -> np.ndarray:
    """M f(x) = max over radii of the quadrature average of |f| on B(x, r) ∩ grid."""
    cfg = default_config(grid) if cfg is None else cfg
    a = np.abs(grid.check(f))
    return _kernels.ball_max_average(grid.points, grid.weights, a, np.asarray(cfg.radii))


def peetre_sup(values, grid: Grid, scale: float, s: float) -> np.ndarray:
    """sup_t values(t) / (1 + scale |x - t|)^s over grid nodes t, at every x."""
    if not s > 0:
        raise ValueError(f"Peetre exponent s must be positive, got {s}")
    return _kernels.peetre_sup(grid.points, np.abs(values), scale, s)


def dyadic_piece(system: DyadicSystem, ed: EigenDecomposition, j: int, f) -> np.ndarray:
    return apply_spectral(ed, lambda lam: system(j, lam), f)


def peetre_maximal(
    system: DyadicSystem,
    ed: EigenDecomposition,
    j: int,
    s: float,
    f,
    order: str = "star",
    piece: np.ndarray | None = None,
) -> np.ndarray:
    """φ*_{j,s} f (``order="star"``) or φ**_{j,s} f (``order="star_star"``).

    ``piece`` may pass a precomputed φ_j(H) f. The gradient for φ** is the
    Euclidean norm of the 4th-order finite-difference gradient.
    """
    if order not in PEETRE_ORDERS:
        raise ValueError(f"order must be one of {PEETRE_ORDERS}, got {order!r}")
    if not s > 0:
        raise ValueError(f"Peetre exponent s must be positive, got {s}")
    if not system.j_min <= j <= system.j_max:
        raise ValueError(f"j={j} outside the system range [{system.j_min}, {system.j_max}]")
    g = dyadic_piece(system, ed, j, f) if piece is None else piece
    if order == "star":
        a = np.abs(g)
    else:
        a = np.sqrt(np.sum(np.abs(ed.grid.gradient(g)) ** 2, axis=0))
    return peetre_sup(a, ed.grid, 2.0 ** (j / 2.0), s)
