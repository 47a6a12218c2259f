"""Hot inner loops, in a numba version and a pure-numpy version.

The numba path is used unless ``SPECBAND_NUMBA=0`` is set in the environment
before import. Both paths compute the same quantities with the same
floating-point formulas; only the summation order of the ball averages
differs. ``SPECBAND_THREADS`` caps the numba worker count.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("SPECBAND_NUMBA", "1").lower() not in {
    "0",
    "false",
    "no",
    "off",
}

# relative slack for "distance <= radius" so nodes sitting exactly on a
# sphere are not lost to rounding in x[i] - x[j]
BALL_RTOL = 1e-9
_ROW_CHUNK = 256

if HAVE_NUMBA:
    # an old system TBB only means numba falls back to another threading layer
    warnings.filterwarnings("ignore", message="The TBB threading layer")
    _threads = os.environ.get("SPECBAND_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))


def _pair_distances(points, rows):
    diff = points[rows, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


# ---------------------------------------------------------------- numpy path


def peetre_sup_numpy(points, values, scale, s):
    n_nodes = points.shape[0]
    out = np.empty(n_nodes)
    for start in range(0, n_nodes, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, n_nodes))
        d = _pair_distances(points, rows)
        damp = np.exp(s * np.log1p(scale * d))
        out[rows] = np.max(values[None, :] / damp, axis=1)
    return out


def ball_max_average_numpy(points, weights, values, radii):
    n_nodes = points.shape[0]
    wv = weights * values
    out = np.zeros(n_nodes)
    for start in range(0, n_nodes, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, n_nodes))
        d = _pair_distances(points, rows)
        best = np.zeros(len(rows))
        for r in radii:
            inside = (d <= r * (1.0 + BALL_RTOL)).astype(np.float64)
            mass = inside @ weights
            total = inside @ wv
            ok = mass > 0
            avg = np.where(ok, total / np.where(ok, mass, 1.0), 0.0)
            # a ball holding only its centre averages to the value itself;
            # (w v) / w may be off by an ulp, which breaks M f >= |f|
            alone = inside.sum(axis=1) == 1
            avg[alone] = values[rows[alone]]
            best = np.maximum(best, avg)
        out[rows] = best
    return out


def weighted_abs_sup_numpy(kernel, points, scale, power):
    n_rows = kernel.shape[0]
    best = 0.0
    for start in range(0, n_rows, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, n_rows))
        d = _pair_distances(points, rows)
        weight = np.exp(power * np.log1p(scale * d))
        best = max(best, float(np.max(np.abs(kernel[rows]) * weight)))
    return best


def weighted_l1_columns_numpy(kernel, points, weights, scale, power):
    n_rows, n_cols = kernel.shape
    out = np.zeros(n_cols)
    for start in range(0, n_rows, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, n_rows))
        d = _pair_distances(points, rows)
        weight = np.exp(power * np.log1p(scale * d))
        out += np.sum(weights[rows, None] * np.abs(kernel[rows]) * weight, axis=0)
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, inline="always")
    def _dist(points, a, b):
        acc = 0.0
        for k in range(points.shape[1]):
            t = points[a, k] - points[b, k]
            acc += t * t
        return np.sqrt(acc)

    @njit(parallel=True, cache=True)
    def peetre_sup_numba(points, values, scale, s):
        # the damping is >= 1, so visiting nodes by decreasing value lets the
        # scan stop once values[t] <= best (for best >= 0); a max does not
        # depend on visit order, so the result matches the full scan exactly
        n_nodes = points.shape[0]
        order = np.argsort(-values)
        out = np.empty(n_nodes)
        for i in prange(n_nodes):
            best = values[i]
            for k in range(n_nodes):
                t = order[k]
                if best >= 0.0 and values[t] <= best:
                    break
                cand = values[t] / np.exp(s * np.log1p(scale * _dist(points, i, t)))
                if cand > best:
                    best = cand
            out[i] = best
        return out

    @njit(parallel=True, cache=True)
    def ball_max_average_numba(points, weights, values, radii):
        n_nodes = points.shape[0]
        n_r = radii.shape[0]
        out = np.zeros(n_nodes)
        for i in prange(n_nodes):
            mass = np.zeros(n_r)
            total = np.zeros(n_r)
            count = np.zeros(n_r, dtype=np.int64)
            for y in range(n_nodes):
                d = _dist(points, i, y)
                # smallest radius whose ball holds y
                b = n_r
                for m in range(n_r):
                    if d <= radii[m] * (1.0 + BALL_RTOL):
                        b = m
                        break
                if b < n_r:
                    mass[b] += weights[y]
                    total[b] += weights[y] * values[y]
                    count[b] += 1
            best = 0.0
            cm = 0.0
            ct = 0.0
            cc = 0
            for m in range(n_r):
                cm += mass[m]
                ct += total[m]
                cc += count[m]
                avg = values[i] if cc == 1 else (ct / cm if cm > 0.0 else 0.0)
                if avg > best:
                    best = avg
            out[i] = best
        return out

    @njit(parallel=True, cache=True)
    def _weighted_abs_sup_rows(kernel, points, scale, power):
        n_rows, n_cols = kernel.shape
        row_best = np.zeros(n_rows)
        for i in prange(n_rows):
            best = 0.0
            for y in range(n_cols):
                v = abs(kernel[i, y]) * np.exp(power * np.log1p(scale * _dist(points, i, y)))
                if v > best:
                    best = v
            row_best[i] = best
        return row_best

    def weighted_abs_sup_numba(kernel, points, scale, power):
        return float(np.max(_weighted_abs_sup_rows(kernel, points, scale, power)))

    @njit(parallel=True, cache=True)
    def weighted_l1_columns_numba(kernel, points, weights, scale, power):
        n_rows, n_cols = kernel.shape
        out = np.zeros(n_cols)
        for y in prange(n_cols):
            acc = 0.0
            for x in range(n_rows):
                acc += weights[x] * abs(kernel[x, y]) * np.exp(
                    power * np.log1p(scale * _dist(points, x, y))
                )
            out[y] = acc
        return out


# ---------------------------------------------------------------- dispatch


def _contig(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def peetre_sup(points, values, scale, s):
    """max_t values[t] / (1 + scale*|x - t|)^s for every node x."""
    args = (_contig(points), _contig(values), float(scale), float(s))
    if USE_NUMBA:
        return peetre_sup_numba(*args)
    return peetre_sup_numpy(*args)


def ball_max_average(points, weights, values, radii):
    """Largest quadrature average of ``values`` over balls centred at each node."""
    args = (_contig(points), _contig(weights), _contig(values), _contig(np.sort(radii)))
    if USE_NUMBA:
        return ball_max_average_numba(*args)
    return ball_max_average_numpy(*args)


def weighted_abs_sup(kernel, points, scale, power):
    """sup_{x,y} |K(x,y)| (1 + scale*|x - y|)^power."""
    args = (_contig(kernel), _contig(points), float(scale), float(power))
    if USE_NUMBA:
        return weighted_abs_sup_numba(*args)
    return weighted_abs_sup_numpy(*args)


def weighted_l1_columns(kernel, points, weights, scale, power):
    """Per column y: sum_x w_x |K(x,y)| (1 + scale*|x - y|)^power."""
    args = (_contig(kernel), _contig(points), _contig(weights), float(scale), float(power))
    if USE_NUMBA:
        return weighted_l1_columns_numba(*args)
    return weighted_l1_columns_numpy(*args)


def backend():
    return "numba" if USE_NUMBA else "numpy"
