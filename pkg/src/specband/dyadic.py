"""Smooth dyadic systems {φ_j} on the spectral axis.

The base function is the telescoping difference φ(x) = Ψ(x/2) - Ψ(x) of a
bump Ψ that equals 1 on |x| <= 1/2 and 0 on |x| >= 1. Members are
φ_j(λ) = φ(2^{1-j} λ), supported in 2^{j-2} <= |λ| <= 2^j, and
Σ_j φ_j = 1 away from 0.

Derivatives are taken numerically: central differences of order k at step
δ_k and δ_k/2, combined by one Richardson step (error O(δ^4)). The steps are
fixed in ``DERIVATIVE_STEPS``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

K_MAX = 4
DERIVATIVE_STEPS = {1: 1e-4, 2: 5e-4, 3: 5e-4, 4: 1e-3}
SAMPLE_DENSITY = 4096

# central stencils (offsets, weights) for the k-th derivative, O(δ^2)
_CENTRAL = {
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}


def richardson_derivative(func: Callable, x, k: int, step: float | None = None) -> np.ndarray:
    """k-th derivative of a vectorised scalar function, k <= 4."""
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.asarray(func(x), dtype=float)
    if k not in _CENTRAL:
        raise ValueError(f"derivative order must be between 0 and {K_MAX}, got {k}")
    step = DERIVATIVE_STEPS[k] if step is None else step
    offsets, weights = _CENTRAL[k]

    def central(d):
        acc = np.zeros_like(x)
        for o, w in zip(offsets, weights):
            acc = acc + w * func(x + o * d)
        return acc / d**k

    return (4.0 * central(step / 2) - central(step)) / 3.0


def _mollifier(t, sharpness):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-sharpness / t[pos])
    return out


def smooth_step(s, sharpness: float = 1.0) -> np.ndarray:
    """C^∞ step: 0 for s <= 0, 1 for s >= 1, built from exp(-a/t)."""
    s = np.asarray(s, dtype=float)
    up = _mollifier(s, sharpness)
    down = _mollifier(1.0 - s, sharpness)
    return up / (up + down)


@dataclass(frozen=True)
class BumpProfile:
    """Ψ = 1 on |x| <= 1/2, 0 on |x| >= 1, monotone transition in between.

    ``sharpness`` is the a in exp(-a/t); distinct values give distinct
    admissible profiles.
    """

    sharpness: float = 1.0

    @property
    def name(self) -> str:
        return f"bump(a={self.sharpness:g})"

    def __call__(self, x) -> np.ndarray:
        s = (np.abs(np.asarray(x, dtype=float)) - 0.5) / 0.5
        return 1.0 - smooth_step(s, self.sharpness)

    def derivative(self, x, k: int) -> np.ndarray:
        return richardson_derivative(self, x, k)


@dataclass(frozen=True)
class IndicatorProfile:
    """Discontinuous Ψ = 1_{|x| <= cut}; the negative control for smoothness."""

    cut: float = 0.75

    @property
    def name(self) -> str:
        return f"indicator(cut={self.cut:g})"

    def __call__(self, x) -> np.ndarray:
        return (np.abs(np.asarray(x, dtype=float)) <= self.cut).astype(float)

    def derivative(self, x, k: int) -> np.ndarray:
        return richardson_derivative(self, x, k)


def telescoping_base(profile) -> Callable:
    def base(x):
        x = np.asarray(x, dtype=float)
        return profile(x / 2.0) - profile(x)

    return base


def l2_normalized_base(base: Callable) -> Callable:
    """φ / sqrt(Σ_i φ(2^i ·)^2), so that the squares of the members sum to 1."""

    def normalized(x):
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for i in range(-2, 3):
            total = total + base(2.0**i * x) ** 2
        vals = base(x)
        out = np.zeros_like(x)
        nz = total > 0
        out[nz] = vals[nz] / np.sqrt(total[nz])
        return out

    return normalized


@dataclass(frozen=True)
class DyadicSystem:
    """The family φ_j(λ) = base(2^{1-j} λ), j_min <= j <= j_max."""

    base: Callable = field(repr=False, compare=False)
    j_min: int
    j_max: int
    name: str = "custom"
    constants: dict = field(default_factory=dict, compare=False)
    sum_bounds: tuple[float, float] = (float("nan"), float("nan"))

    @property
    def js(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def __call__(self, j: int, lam) -> np.ndarray:
        return self.base(2.0 ** (1 - j) * np.asarray(lam, dtype=float))

    def derivative(self, j: int, lam, k: int) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        return 2.0 ** (k * (1 - j)) * richardson_derivative(self.base, 2.0 ** (1 - j) * lam, k)

    def table(self, lam) -> np.ndarray:
        """φ_j(λ) for all j (rows) at the given λ (columns)."""
        return np.stack([self(j, lam) for j in self.js])

    def total(self, lam) -> np.ndarray:
        return self.table(lam).sum(axis=0)

    @property
    def covered_range(self) -> tuple[float, float]:
        """λ-interval on which every contributing j is in range (sum is complete)."""
        return 2.0 ** (self.j_min - 1), 2.0 ** (self.j_max - 1)

    def with_base(self, base: Callable, name: str) -> "DyadicSystem":
        return DyadicSystem(base, self.j_min, self.j_max, name)


def _band_samples(j, density, lo_exp=-2, hi_exp=0):
    # power-of-two multiples of one base grid, so every band sees the same
    # base-profile arguments bit for bit
    return 2.0 ** float(j) * np.geomspace(2.0**lo_exp, 2.0**hi_exp, density)


def measure_constants(system: DyadicSystem, k_max: int = K_MAX, density: int = SAMPLE_DENSITY) -> dict:
    """c_k = max_j sup_λ |φ_j^{(k)}(λ)| 2^{kj}, sampled over each support."""
    out = {}
    for k in range(k_max + 1):
        best = 0.0
        for j in system.js:
            lam = _band_samples(j, density)
            best = max(best, float(np.max(np.abs(system.derivative(j, lam, k)))) * 2.0 ** (k * j))
        out[k] = best
    return out


def _sum_bounds(system: DyadicSystem, lo: float, hi: float, density: int) -> tuple[float, float]:
    octaves = max(1, int(np.ceil(np.log2(hi / lo))))
    lam = np.geomspace(lo, hi, octaves * density)
    total = system.total(lam)
    return float(total.min()), float(total.max())


def make_system(
    profile=None,
    j_min: int = -20,
    j_max: int = 20,
    k_max: int = K_MAX,
    normalize: str | None = None,
    density: int = 1024,
) -> DyadicSystem:
    """Telescoping dyadic system from a bump profile.

    ``normalize="l2"`` rescales the base so that Σ_j φ_j^2 = 1 instead of
    Σ_j φ_j = 1. The derivative constants c_k (k <= k_max) and the sum bounds
    over ``covered_range`` are measured at construction.
    """
    if j_min > j_max:
        raise ValueError(f"j_min ({j_min}) must not exceed j_max ({j_max})")
    profile = BumpProfile() if profile is None else profile
    base = telescoping_base(profile)
    name = profile.name
    if normalize == "l2":
        base = l2_normalized_base(base)
        name = f"{name}+l2"
    elif normalize is not None:
        raise ValueError(f"unknown normalisation {normalize!r}")
    bare = DyadicSystem(base, int(j_min), int(j_max), name)
    constants = measure_constants(bare, k_max, density)
    bounds = _sum_bounds(bare, *bare.covered_range, density)
    return DyadicSystem(base, int(j_min), int(j_max), name, constants, bounds)


def without_plateau(system: DyadicSystem, level: float = 0.9) -> DyadicSystem:
    """Corrupt a system by zeroing its base wherever it exceeds ``level``.

    Breaks condition (iii): the sum drops to ~0 where the peaks used to be.
    """
    base = system.base

    def corrupted(x):
        v = base(x)
        return np.where(v > level, 0.0, v)

    return system.with_base(corrupted, f"{system.name}-plateau")


@dataclass(frozen=True)
class ValidationReport:
    support_violations: int
    constants: dict
    sum_bounds: tuple[float, float]
    floor: float
    passed: bool
    lam_range: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "support_violations": self.support_violations,
            "constants": {str(k): v for k, v in self.constants.items()},
            "sum_lower": self.sum_bounds[0],
            "sum_upper": self.sum_bounds[1],
            "floor": self.floor,
            "passed": self.passed,
            "lam_range": list(self.lam_range),
        }


def validate_system(
    system: DyadicSystem,
    lam_range: tuple[float, float],
    sample_density: int = SAMPLE_DENSITY,
    k_max: int = K_MAX,
    floor: float = 1e-2,
) -> ValidationReport:
    """Check conditions (i)-(iii) by dense sampling.

    Support: every φ_j must vanish exactly at samples of |λ| in
    [2^{j-4}, 2^{j+2}] outside [2^{j-2}, 2^j], for both signs of λ.
    Sum: a = min, b = max of Σ_j φ_j over ``lam_range``. Passes iff there are
    no support violations and a > floor.
    """
    lo, hi = map(float, lam_range)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo <= 0 or hi <= lo:
        raise ValueError(f"lam_range must satisfy 0 < lo < hi, got {lam_range}")
    violations = 0
    for j in system.js:
        lam = _band_samples(int(j), sample_density, -4, 2)
        outside = (lam < 2.0 ** (j - 2)) | (lam > 2.0**j)
        for sign in (1.0, -1.0):
            vals = system(int(j), sign * lam[outside])
            violations += int(np.count_nonzero(vals))
    constants = measure_constants(system, k_max, sample_density)
    a, b = _sum_bounds(system, lo, hi, sample_density)
    passed = violations == 0 and a > floor
    return ValidationReport(violations, constants, (a, b), floor, passed, (lo, hi))


@dataclass(frozen=True)
class ReproducingCutoff:
    """ψ with supp ψ ⊂ {1/5 <= |x| <= 5/4} and ψ = 1 on {1/4 <= |x| <= 1}."""

    sharpness: float = 1.0

    def __call__(self, x) -> np.ndarray:
        r = np.abs(np.asarray(x, dtype=float))
        rise = smooth_step((r - 0.2) / 0.05, self.sharpness)
        fall = 1.0 - smooth_step((r - 1.0) / 0.25, self.sharpness)
        return rise * fall

    def member(self, j: int, lam) -> np.ndarray:
        """ψ_j(λ) = ψ(2^{-j} λ)."""
        return self(2.0 ** (-j) * np.asarray(lam, dtype=float))


def make_reproducing_cutoff(profile=None) -> ReproducingCutoff:
    sharpness = getattr(profile, "sharpness", 1.0)
    return ReproducingCutoff(sharpness)
