"""Heat-kernel checks for the Hermite operator.

``mehler_check`` compares the eigen-series heat kernel with the closed form.
``gaussian_bound_fit`` certifies the two-regime Gaussian upper bound

    |∇^α p_{t/2}(x,y)| <= c t^{-(n+α)/2} exp(-c0 |x-y|^2 / t)   (t <= t0)
    |∇^α p_{t/2}(x,y)| <= c exp(-n t / 2) exp(-c1 |x-y|^2)      (t >  t0)

by grid search over (c0, c1, t0) with c minimised per candidate; everything
is done with log-kernels so that tiny kernel values never overflow the
exponential weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..calculus import heat_kernel_eigen, mehler_gradient_factor, mehler_log_kernel
from ..grid import make_grid
from ..operator import EigenDecomposition
from .report import VerificationReport

DEFAULT_T_GRID = tuple(np.round(np.geomspace(0.05, 4.0, 40), 12))
DEFAULT_C_GRID = tuple(np.round(np.linspace(0.05, 0.95, 19), 12))


def mehler_check(
    ed: EigenDecomposition,
    t_list=(0.1, 0.5, 1.0),
    window: float = 4.0,
    tol: float = 1e-6,
    grad_tol: float = 1e-4,
    config: dict | None = None,
) -> VerificationReport:
    """Eigen-series vs closed-form heat kernel on |x|, |y| <= window.

    Errors are relative to the sup of the closed form over the window.
    """
    grid = ed.grid
    report = VerificationReport("mehler", config=dict(config or {}))
    tab = report.table("mehler", ["t", "rel_error", "grad_rel_error"])
    sel = np.all(np.abs(grid.points) <= window + 1e-12, axis=1)
    pts = grid.points[sel]
    X, Y = pts[:, None, :], pts[None, :, :]
    worst = worst_g = 0.0
    for t in t_list:
        K = heat_kernel_eigen(ed, t, with_gradient=True)
        exact = np.exp(mehler_log_kernel(X, Y, t))
        num = K.values[np.ix_(sel, sel)]
        err = float(np.max(np.abs(num - exact)) / np.max(np.abs(exact)))
        gexact = exact[..., None] * mehler_gradient_factor(X, Y, t)
        gnum = np.moveaxis(K.gradient[:, sel][:, :, sel], 0, -1)
        gerr = float(np.max(np.abs(gnum - gexact)) / np.max(np.abs(gexact)))
        tab.add(t, err, gerr)
        worst, worst_g = max(worst, err), max(worst_g, gerr)
    report.summary.update(max_rel_error=worst, max_grad_rel_error=worst_g)
    report.check("kernel", worst <= tol, worst, tol)
    report.check("gradient", worst_g <= grad_tol, worst_g, grad_tol)
    return report


@dataclass(frozen=True)
class KernelSample:
    """Log |∇^α p_{t/2}(x, y)| on sampled pairs, with squared distances."""

    t: float
    log_abs: np.ndarray
    dist2: np.ndarray


def hermite_samples(
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    alpha: int = 0,
    n: int = 1,
    window: float = 6.0,
    points_per_axis: int = 121,
) -> list[KernelSample]:
    """Closed-form p_{t/2} (or its x-gradient norm) on a window grid."""
    grid = make_grid(n, window, points_per_axis)
    pts = grid.points
    X, Y = pts[:, None, :], pts[None, :, :]
    d2 = np.sum((X - Y) ** 2, axis=-1).ravel()
    out = []
    for t in t_grid:
        logk = mehler_log_kernel(X, Y, 0.5 * t)
        if alpha == 1:
            g = np.sqrt(np.sum(mehler_gradient_factor(X, Y, 0.5 * t) ** 2, axis=-1))
            with np.errstate(divide="ignore"):
                logk = logk + np.log(g)
        out.append(KernelSample(float(t), logk.ravel(), d2))
    return out


def samples_from_kernels(kernels, alpha: int = 0, window: float = 6.0) -> list[KernelSample]:
    """KernelSamples from (t, Kernel) pairs whose kernels are p_{t/2}."""
    out = []
    for t, K in kernels:
        sel = np.all(np.abs(K.grid.points) <= window + 1e-12, axis=1)
        pts = K.grid.points[sel]
        d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1).ravel()
        if alpha == 0:
            a = np.abs(K.values[np.ix_(sel, sel)])
        else:
            a = np.sqrt(np.sum(K.gradient[:, sel][:, :, sel] ** 2, axis=0))
        with np.errstate(divide="ignore"):
            out.append(KernelSample(float(t), np.log(a).ravel(), d2))
    return out


def _max_finite(a):
    a = a[np.isfinite(a)]
    return float(a.max()) if a.size else -np.inf


def gaussian_bound_fit(
    samples: Sequence[KernelSample],
    alpha: int = 0,
    n: int = 1,
    c0_grid: Sequence[float] = DEFAULT_C_GRID,
    c1_grid: Sequence[float] = DEFAULT_C_GRID,
    t0_min: float = 1.0,
    c_max: float = 10.0,
    config: dict | None = None,
) -> VerificationReport:
    """Certify the two-regime bound.

    t0 ranges over sampled t values above ``t0_min`` that leave at least one
    sample in the large-t regime.
    """
    if alpha not in (0, 1):
        raise ValueError("alpha must be 0 or 1")
    samples = sorted(samples, key=lambda s: s.t)
    ts = np.array([s.t for s in samples])
    expo = (n + alpha) / 2.0
    # per-t requirement on log c, for each c0 / c1
    small = np.array([[_max_finite(s.log_abs + expo * np.log(s.t) + c0 * s.dist2 / s.t) for c0 in c0_grid] for s in samples])
    large = np.array([[_max_finite(s.log_abs + n * s.t / 2.0 + c1 * s.dist2) for c1 in c1_grid] for s in samples])
    # both regimes must hold samples
    t0_candidates = [i for i, t in enumerate(ts[:-1]) if t > t0_min]
    if not t0_candidates:
        raise ValueError(f"t-grid needs at least two values above t0_min={t0_min}")

    # per candidate, c is the smallest feasible constant; among candidates with
    # c <= c_max the sharpest decay (largest c0, then c1) wins, then smallest c
    best = None
    fallback = None
    for i0 in t0_candidates:
        lo = small[: i0 + 1].max(axis=0)
        hi = large[i0 + 1 :].max(axis=0)
        for a, c0 in enumerate(c0_grid):
            for b, c1 in enumerate(c1_grid):
                logc = max(lo[a], hi[b])
                cand = (logc, float(c0), float(c1), float(ts[i0]))
                if fallback is None or logc < fallback[0]:
                    fallback = cand
                if logc <= np.log(c_max):
                    key = (c0, c1, -logc)
                    if best is None or key > best[0]:
                        best = (key, cand)
    logc, c0, c1, t0 = best[1] if best is not None else fallback
    c = float(np.exp(logc))

    report = VerificationReport(f"gaussian_bound_alpha{alpha}", config=dict(config or {}))
    tab = report.table("gaussian_bound", ["t", "regime", "max_ratio", "violations"])
    total_viol = 0
    worst = (-np.inf, None)
    c_used = min(c, c_max)
    for s in samples:
        if s.t <= t0:
            logb = np.log(c_used) - expo * np.log(s.t) - c0 * s.dist2 / s.t
            regime = "small"
        else:
            logb = np.log(c_used) - n * s.t / 2.0 - c1 * s.dist2
            regime = "large"
        lr = s.log_abs - logb
        viol = int(np.count_nonzero(lr > 1e-12))
        total_viol += viol
        m = _max_finite(lr)
        if m > worst[0]:
            k = int(np.nanargmax(np.where(np.isfinite(lr), lr, -np.inf)))
            worst = (m, {"t": s.t, "pair": k, "log_ratio": m})
        tab.add(s.t, regime, float(np.exp(m)) if np.isfinite(m) else 0.0, viol)
    report.summary.update(c=c, c0=c0, c1=c1, t0=t0, alpha=alpha, n=n, violations=total_viol)
    if c > c_max:
        report.notes.append(f"no feasible constants below c_max={c_max}; worst sample {worst[1]}")
    report.check("feasible", c <= c_max, c, c_max)
    report.check("no_violations", total_viol == 0, total_viol, 0)
    return report
