"""Uniform tensor grids on [-L, L]^n, quadrature, and L_p / mixed norms.

Grid functions are plain 1-D arrays aligned with ``Grid.points`` (C order for
n = 2). Quadrature is the trapezoid rule per axis: every interior node carries
weight h^n and boundary nodes carry the halved weights, so the weights sum to
(2L)^n exactly. All Dirichlet eigenfunctions vanish on the boundary, so the
boundary weights never enter a spectral computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

SUPPORTED_DIMENSIONS = (1, 2)
MIN_POINTS = 3


@dataclass(frozen=True)
class Grid:
    n: int
    L: float
    P: int
    axis: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n not in SUPPORTED_DIMENSIONS:
            raise ValueError(f"unsupported dimension n={self.n}; expected 1 or 2")
        if not np.isfinite(self.L) or self.L <= 0:
            raise ValueError(f"halfwidth L must be finite and positive, got {self.L!r}")
        if int(self.P) != self.P or self.P < MIN_POINTS:
            raise ValueError(f"points_per_axis must be an integer >= {MIN_POINTS}, got {self.P!r}")
        axis = np.linspace(-self.L, self.L, int(self.P))
        # exact symmetry about 0
        axis = 0.5 * (axis - axis[::-1])
        axis.setflags(write=False)
        object.__setattr__(self, "axis", axis)

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.P - 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.P,) * self.n

    @property
    def size(self) -> int:
        return self.P**self.n

    @property
    def cell_weight(self) -> float:
        """Quadrature weight h^n of an interior node."""
        return self.h**self.n

    @cached_property
    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*([self.axis] * self.n), indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        pts.setflags(write=False)
        return pts

    @cached_property
    def weights(self) -> np.ndarray:
        w1 = np.full(self.P, self.h)
        w1[0] = w1[-1] = 0.5 * self.h
        w = w1
        for _ in range(self.n - 1):
            w = np.multiply.outer(w, w1)
        w = np.ascontiguousarray(w.ravel())
        w.setflags(write=False)
        return w

    @cached_property
    def interior(self) -> np.ndarray:
        """Boolean mask of nodes not on the boundary of the box."""
        inner1 = np.ones(self.P, dtype=bool)
        inner1[0] = inner1[-1] = False
        mask = inner1
        for _ in range(self.n - 1):
            mask = np.logical_and.outer(mask, inner1)
        mask = mask.ravel()
        mask.setflags(write=False)
        return mask

    def radius(self) -> np.ndarray:
        """|x| at every node."""
        return np.sqrt(np.sum(self.points**2, axis=1))

    def evaluate(self, func) -> np.ndarray:
        """Sample ``func(points)`` where points has shape (size, n)."""
        return self.check(np.asarray(func(self.points)))

    def check(self, values) -> np.ndarray:
        values = np.asarray(values)
        if values.shape != (self.size,):
            raise ValueError(f"grid function must have shape ({self.size},), got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid function contains non-finite values")
        return values

    def inner(self, u, v) -> complex | float:
        """Quadrature inner product sum w * conj(u) * v."""
        return np.sum(self.weights * np.conj(u) * v)

    def gradient(self, values: np.ndarray) -> np.ndarray:
        """Fourth-order finite-difference gradient along each axis.

        ``values`` may carry trailing dimensions (e.g. a kernel K(x, y) with x
        leading); the result has shape (n, *values.shape). The two nodes next
        to each boundary use one-sided five-point stencils.
        """
        values = np.asarray(values)
        trailing = values.shape[1:]
        cube = values.reshape(self.shape + trailing)
        parts = [fd_derivative(cube, self.h, axis=a).reshape(values.shape) for a in range(self.n)]
        return np.stack(parts)


def fd_derivative(arr: np.ndarray, h: float, axis: int = 0) -> np.ndarray:
    """First derivative along ``axis``, fourth order everywhere."""
    a = np.moveaxis(np.asarray(arr), axis, 0)
    m = a.shape[0]
    if m < 5:
        raise ValueError("fourth-order differences need at least 5 points per axis")
    out = np.empty_like(a)
    out[2:-2] = (a[:-4] - 8.0 * a[1:-3] + 8.0 * a[3:-1] - a[4:]) / (12.0 * h)
    out[0] = (-25.0 * a[0] + 48.0 * a[1] - 36.0 * a[2] + 16.0 * a[3] - 3.0 * a[4]) / (12.0 * h)
    out[1] = (-3.0 * a[0] - 10.0 * a[1] + 18.0 * a[2] - 6.0 * a[3] + a[4]) / (12.0 * h)
    out[-1] = (25.0 * a[-1] - 48.0 * a[-2] + 36.0 * a[-3] - 16.0 * a[-4] + 3.0 * a[-5]) / (12.0 * h)
    out[-2] = (3.0 * a[-1] + 10.0 * a[-2] - 18.0 * a[-3] + 6.0 * a[-4] - a[-5]) / (12.0 * h)
    return np.moveaxis(out, 0, axis)


def make_grid(n: int, L: float, P: int) -> Grid:
    return Grid(int(n), float(L), int(P))


def _check_exponent(p, name="p"):
    p = float(p)
    if not p > 0:
        raise ValueError(f"{name} must be positive (or inf), got {p}")
    return p


def lp_norm(f, p, grid: Grid) -> float:
    """Quadrature L_p (quasi-)norm; p = inf gives max |f|."""
    p = _check_exponent(p)
    a = np.abs(np.asarray(f))
    if a.shape != (grid.size,):
        raise ValueError(f"grid function must have shape ({grid.size},), got {a.shape}")
    top = float(a.max()) if a.size else 0.0
    if np.isinf(p) or top == 0.0 or not np.isfinite(top):
        return top
    # factor out max|f| so that |f|^p neither underflows nor overflows
    return top * float(np.sum(grid.weights * (a / top) ** p) ** (1.0 / p))


def _lq_combine(stack, q, axis=0):
    top = np.max(stack, axis=axis)
    if np.isinf(q):
        return top
    safe = np.where(top > 0, top, 1.0)
    return top * np.sum((stack / np.expand_dims(safe, axis)) ** q, axis=axis) ** (1.0 / q)


def mixed_norm(
    stack: Sequence[np.ndarray] | np.ndarray,
    p: float,
    q: float,
    grid: Grid,
    mode: str = "Lp_of_lq",
    alpha: float = 0.0,
    indices: Sequence[int] | None = None,
) -> float:
    """Norm of an indexed family {f_j} with dyadic weights 2^{j alpha}.

    ``mode="Lp_of_lq"`` is || (sum_j (2^{j alpha}|f_j|)^q)^{1/q} ||_p and
    ``mode="lq_of_Lp"`` is (sum_j (2^{j alpha} ||f_j||_p)^q)^{1/q}. ``indices``
    gives the j of each member (default 0, 1, ...).
    """
    p = _check_exponent(p)
    q = _check_exponent(q, "q")
    arr = np.abs(np.asarray(stack))
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("mixed_norm needs a non-empty family of grid functions")
    if arr.shape[1] != grid.size:
        raise ValueError("family members do not live on the given grid")
    js = np.arange(arr.shape[0]) if indices is None else np.asarray(indices, dtype=float)
    if js.shape != (arr.shape[0],):
        raise ValueError("indices must match the family length")
    scale = 2.0 ** (js * alpha)
    if mode == "Lp_of_lq":
        return lp_norm(_lq_combine(scale[:, None] * arr, q), p, grid)
    if mode == "lq_of_Lp":
        norms = np.array([lp_norm(row, p, grid) for row in arr])
        return float(_lq_combine(scale * norms, q))
    raise ValueError(f"unknown mode {mode!r}; expected 'Lp_of_lq' or 'lq_of_Lp'")
