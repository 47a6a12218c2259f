"""Kernel decay constants c_N(j) and their uniformity over j."""

from __future__ import annotations

import logging

import numpy as np

from .. import _kernels
from ..calculus import spectral_kernel
from ..dyadic import DyadicSystem
from ..operator import EigenDecomposition
from .report import VerificationReport

log = logging.getLogger(__name__)

DECAY_COLUMNS = ["j", "N", "alpha", "c_N", "resolved"]


def band_status(ed: EigenDecomposition, system: DyadicSystem, j: int, exploratory_below: int | None = None) -> str:
    """'unresolved' if the band holds no eigenvalue or runs past the trusted
    spectrum, 'exploratory' for j below ``exploratory_below``, else 'core'."""
    if not np.any(system(j, ed.values) != 0) or 2.0**j > ed.resolved_cutoff:
        return "unresolved"
    if exploratory_below is not None and j < exploratory_below:
        return "exploratory"
    return "core"


def kernel_decay_constant(kernel_abs: np.ndarray, points: np.ndarray, j: int, N: float, n: int, alpha: int) -> float:
    """sup_{x,y} |∇^α K(x,y)| (1 + 2^{j/2}|x-y|)^N / 2^{(n+α)j/2}."""
    sup = _kernels.weighted_abs_sup(kernel_abs, points, 2.0 ** (j / 2.0), N)
    return sup / 2.0 ** ((n + alpha) * j / 2.0)


def fit_decay_constants(
    ed: EigenDecomposition,
    system: DyadicSystem,
    N_list=(1, 2, 4),
    alphas=(0, 1),
    ceiling: float = 50.0,
    exploratory_below: int | None = None,
    config: dict | None = None,
) -> VerificationReport:
    """Fit c_N(j) for every j of the system; U_N = max_j c_N / min_j c_N over
    the core j-window. Passes iff every U_N <= ceiling."""
    for a in alphas:
        if a not in (0, 1):
            raise ValueError("kernel derivative order alpha must be 0 or 1")
    grid = ed.grid
    report = VerificationReport("decay", config=dict(config or {}))
    rows = report.table("decay", DECAY_COLUMNS)
    windows = report.table("windows", ["j", "status"])
    uniform = report.table("uniformity", ["N", "alpha", "U_N", "j_lo", "j_hi", "ceiling", "passed"])
    values: dict[tuple, dict[int, float]] = {}
    for j in system.js:
        j = int(j)
        status = band_status(ed, system, j, exploratory_below)
        windows.add(j, status)
        if status == "unresolved":
            report.notes.append(f"j={j} excluded: band empty or beyond the resolved spectrum")
            log.warning("decay: j=%d excluded (band empty or unresolved)", j)
            for N in N_list:
                for a in alphas:
                    rows.add(j, N, a, float("nan"), False)
            continue
        K = spectral_kernel(ed, lambda lam: system(j, lam), with_gradient=1 in alphas)
        for a in alphas:
            if a == 0:
                A = np.abs(K.values)
            else:
                A = np.sqrt(np.sum(K.gradient**2, axis=0))
            for N in N_list:
                c = kernel_decay_constant(A, grid.points, j, N, grid.n, a)
                rows.add(j, N, a, c, True)
                if status == "core":
                    values.setdefault((N, a), {})[j] = c
    for N in N_list:
        for a in alphas:
            cs = values.get((N, a), {})
            if not cs:
                uniform.add(N, a, float("nan"), None, None, ceiling, False)
                report.check(f"U_{N}_alpha{a}", False, None, ceiling)
                continue
            arr = np.array(list(cs.values()))
            U = float(arr.max() / arr.min()) if arr.min() > 0 else float("inf")
            ok = U <= ceiling
            uniform.add(N, a, U, min(cs), max(cs), ceiling, ok)
            report.check(f"U_{N}_alpha{a}", ok, U, ceiling)
    report.summary["system"] = system.name
    return report


def uniformity(report: VerificationReport, N: int, alpha: int) -> float:
    for rec in report.tables["uniformity"].records():
        if rec["N"] == N and rec["alpha"] == alpha:
            return rec["U_N"]
    raise KeyError((N, alpha))
