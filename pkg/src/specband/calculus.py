"""Functional calculus φ(H) on a discrete eigensystem, and the Mehler kernel.

Kernels are continuum-normalised: with quadrature weights w,
(K f)(x) = Σ_y w_y K(x, y) f(y), so K(x, y) = Σ_k φ(λ_k) e_k(x) e_k(y)
approximates the integral kernel of φ(H) and can be compared directly with
bounds such as 2^{nj/2}.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .grid import Grid
from .operator import EigenDecomposition

log = logging.getLogger(__name__)

# eigen-series terms with e^{-tλ} below this are dropped
HEAT_SERIES_CUTOFF = 1e-16


@dataclass(frozen=True)
class Kernel:
    grid: Grid
    values: np.ndarray = field(repr=False)
    gradient: np.ndarray | None = field(default=None, repr=False)
    continuum: bool = True

    def apply(self, f) -> np.ndarray:
        return self.values @ (self.grid.weights * np.asarray(f))

    def asymmetry(self) -> float:
        return float(np.max(np.abs(self.values - self.values.T)))

    def to_csv(self, path: str | Path) -> Path:
        """Rows ``x_index,y_index,value`` (plus one gradient column per axis)."""
        path = Path(path)
        n_nodes = self.values.shape[0]
        xs, ys = np.divmod(np.arange(n_nodes * n_nodes), n_nodes)
        cols = [xs, ys, self.values.ravel()]
        header = ["x_index", "y_index", "value"]
        if self.gradient is not None:
            cols += [g.ravel() for g in self.gradient]
            header += [f"grad_{a}" for a in range(self.grid.n)]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in zip(*cols):
                w.writerow([int(row[0]), int(row[1]), *(repr(float(v)) for v in row[2:])])
        return path


def _spectral_weights(ed: EigenDecomposition, phi: Callable) -> np.ndarray:
    vals = np.asarray(phi(ed.values))
    if vals.shape != ed.values.shape:
        vals = np.broadcast_to(vals, ed.values.shape)
    if not np.all(np.isfinite(vals)):
        bad = ed.values[~np.isfinite(vals)][:3]
        raise ValueError(f"spectral function is not finite at eigenvalues {bad}")
    return vals


def apply_spectral(ed: EigenDecomposition, phi: Callable, f) -> np.ndarray:
    """φ(H) f = Σ_k φ(λ_k) <e_k, f> e_k."""
    f = np.asarray(f)
    if f.shape != (ed.grid.size,):
        raise ValueError(f"grid function must have shape ({ed.grid.size},), got {f.shape}")
    return ed.synthesize(_spectral_weights(ed, phi) * ed.coefficients(f))


def apply_spectral_many(ed: EigenDecomposition, weights: np.ndarray, f) -> np.ndarray:
    """Rows φ_i(H) f for a table of spectral weights (rows i, columns k)."""
    coeffs = ed.coefficients(f)
    return (np.asarray(weights) * coeffs) @ ed.vectors.T


def spectral_kernel(ed: EigenDecomposition, phi: Callable, with_gradient: bool = False) -> Kernel:
    """K(x,y) = Σ_k φ(λ_k) e_k(x) e_k(y); x-gradient by 4th-order differences."""
    weights = _spectral_weights(ed, phi)
    keep = weights != 0
    E = ed.vectors[:, keep]
    scaled = E * weights[keep]
    K = scaled @ E.T
    grad = None
    if with_gradient:
        dE = ed.grid.gradient(scaled)
        grad = np.stack([d @ E.T for d in dE])
    return Kernel(ed.grid, K, grad)


def heat_kernel_eigen(ed: EigenDecomposition, t: float, with_gradient: bool = False) -> Kernel:
    """e^{-tH}(x,y) by the eigen-series, terms below 1e-16 relative dropped."""
    if not t > 0:
        raise ValueError(f"heat kernel needs t > 0, got {t}")
    lam0 = float(ed.values[0])

    def heat(lam):
        w = np.exp(-t * (lam - lam0))
        w[w < HEAT_SERIES_CUTOFF] = 0.0
        return w * np.exp(-t * lam0)

    return spectral_kernel(ed, heat, with_gradient)


def mehler_log_kernel(x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
    """log e^{-tH}(x,y) for the Hermite operator, x, y of shape (..., n).

    Uses -½coth(2t)(|x|²+|y|²) + cosech(2t) x·y
    = -¼[tanh(t)|x+y|² + coth(t)|x-y|²], which stays finite for any t > 0.
    """
    n = x.shape[-1]
    s = np.sum((x + y) ** 2, axis=-1)
    d = np.sum((x - y) ** 2, axis=-1)
    expo = -0.25 * (np.tanh(t) * s + d / np.tanh(t))
    # log sinh(2t) without overflow
    log_sinh = 2.0 * t + np.log1p(-np.exp(-4.0 * t)) - np.log(2.0)
    return expo - 0.5 * n * (np.log(2.0 * np.pi) + log_sinh)


def mehler_gradient_factor(x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
    """∇_x K / K = -coth(2t) x + cosech(2t) y, shape (..., n)."""
    with np.errstate(over="ignore"):
        cosech = 1.0 / np.sinh(2.0 * t)
    return -x / np.tanh(2.0 * t) + y * cosech


def mehler_kernel(grid: Grid, t: float, with_gradient: bool = False) -> Kernel:
    """Closed-form Hermite heat kernel on all node pairs (underflows to 0, never NaN)."""
    if not t > 0:
        raise ValueError(f"Mehler kernel needs t > 0, got {t}")
    pts = grid.points
    X = pts[:, None, :]
    Y = pts[None, :, :]
    with np.errstate(under="ignore"):
        K = np.exp(mehler_log_kernel(X, Y, t))
        grad = None
        if with_gradient:
            factor = mehler_gradient_factor(X, Y, t)
            grad = np.moveaxis(K[..., None] * factor, -1, 0)
    return Kernel(grid, K, grad)


def band_guard(ed: EigenDecomposition, upper: float, label: str = "") -> bool:
    """Warn (and return False) when a spectral band reaches past the trusted spectrum."""
    if upper > ed.resolved_cutoff:
        log.warning(
            "band %s reaches λ=%g beyond the resolved cutoff %g; results there are unreliable",
            label,
            upper,
            ed.resolved_cutoff,
        )
        return False
    return True
