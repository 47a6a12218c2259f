"""Weighted L^1 bounds for g(2^{-j} H)(·, y)."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .. import _kernels
from ..calculus import spectral_kernel
from ..operator import EigenDecomposition
from .report import VerificationReport

SUPPORT_LIMIT = 10.0


def sobolev_norm(g: Callable, s: float, halfwidth: float = 16.0, points: int = 2**14) -> float:
    """||g||_{H^s(R)} = (∫ (1+ξ^2)^s |ĝ(ξ)|^2 dξ / 2π)^{1/2} by FFT on [-halfwidth, halfwidth)."""
    dx = 2.0 * halfwidth / points
    x = -halfwidth + dx * np.arange(points)
    ghat = dx * np.fft.fft(np.asarray(g(x), dtype=float))
    xi = 2.0 * np.pi * np.fft.fftfreq(points, d=dx)
    dxi = 2.0 * np.pi / (points * dx)
    return float(np.sqrt(np.sum((1.0 + xi**2) ** s * np.abs(ghat) ** 2) * dxi / (2.0 * np.pi)))


def check_support(g: Callable, limit: float = SUPPORT_LIMIT, halfwidth: float = 16.0, points: int = 2**14) -> None:
    x = np.linspace(-halfwidth, halfwidth, points)
    outside = np.abs(x) > limit
    if np.any(np.asarray(g(x[outside])) != 0):
        raise ValueError(f"g must be supported in [-{limit}, {limit}]")


def hebisch_check(
    ed: EigenDecomposition,
    g: Callable,
    beta: float = 0.0,
    s_H: float = 3.5,
    js=range(0, 9),
    ceiling: float = 10.0,
    config: dict | None = None,
) -> VerificationReport:
    """sup_y || g(2^{-j}H)(·,y) <2^{j/2}(·-y)>^β ||_{L^1} per j, its spread over j,
    and the ratio of the overall sup to ||g||_{H^{s_H}}."""
    n = ed.grid.n
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if not s_H > (n + 1) / 2.0 + beta:
        raise ValueError(f"s_H={s_H} must exceed (n+1)/2 + beta = {(n + 1) / 2.0 + beta}")
    op = ed.operator
    if op is not None and not op.potential.nonnegative:
        raise ValueError("the weighted L1 bound is stated for V >= 0")
    check_support(g)
    grid = ed.grid
    report = VerificationReport(f"hebisch_beta{beta:g}", config=dict(config or {}))
    tab = report.table("hebisch", ["j", "beta", "sup_weighted_l1", "argmax_y"])
    sups = []
    for j in js:
        j = int(j)
        K = spectral_kernel(ed, lambda lam: g(2.0 ** (-j) * lam))
        cols = _kernels.weighted_l1_columns(K.values, grid.points, grid.weights, 2.0 ** (j / 2.0), beta)
        k = int(np.argmax(cols))
        sups.append(float(cols[k]))
        tab.add(j, beta, float(cols[k]), k)
    sups = np.array(sups)
    hs = sobolev_norm(g, s_H)
    nz = sups[sups > 0]
    spread = float(nz.max() / nz.min()) if nz.size else 1.0
    top = float(sups.max()) if sups.size else 0.0
    ratio = top / hs if hs > 0 else 0.0
    report.summary.update(spread=spread, sup=top, sobolev_norm=hs, ratio=ratio, s_H=s_H, beta=beta)
    report.check("spread", spread <= ceiling, spread, ceiling)
    report.check("finite", bool(np.isfinite(top)), top, None)
    return report
