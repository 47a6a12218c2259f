"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--P 1024] [--repeat 5] [--end-to-end maximal]

Both paths run on the same inputs (a Hermite eigenfunction on the 1D grid,
plus a 2D grid for the ball averages); the first numba call is timed
separately since it includes compilation (or a cache load).
``--end-to-end CMD`` also times ``python3 -m specband CMD`` with each
backend selected through ``SPECBAND_NUMBA``.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import tempfile
import time
import timeit

import numpy as np

from specband import _kernels as K
from specband.grid import make_grid


def _cases(P: int, P2: int):
    g1 = make_grid(1, 12.0, P)
    x = g1.points
    f = np.abs(np.exp(-0.5 * x[:, 0] ** 2) * (4 * x[:, 0] ** 2 - 2))
    kernel = np.exp(-((x[:, None, 0] - x[None, :, 0]) ** 2))
    g2 = make_grid(2, 6.0, P2)
    f2 = np.exp(-np.sum(g2.points**2, axis=1))
    radii = np.geomspace(g2.h, 6.0, 12)
    return {
        "peetre_sup (1D)": ("peetre_sup", (x, f, 16.0, 2.0)),
        "ball_max_average (2D)": ("ball_max_average", (g2.points, g2.weights, f2, radii)),
        "weighted_abs_sup (1D)": ("weighted_abs_sup", (kernel, x, 4.0, 2.0)),
        "weighted_l1_columns (1D)": ("weighted_l1_columns", (kernel, x, g1.weights, 4.0, 2.0)),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--P", type=int, default=1024, help="1D grid size")
    ap.add_argument("--P2", type=int, default=48, help="2D grid size per axis")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", metavar="CMD", help="also time a CLI command under both backends")
    args = ap.parse_args(argv)

    if not K.HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1
    print(f"1D P={args.P}, 2D P={args.P2}x{args.P2}, best of {args.repeat}")
    print(f"{'kernel':26s} {'first numba':>12s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for label, (name, raw) in _cases(args.P, args.P2).items():
        a = tuple(K._contig(v) if isinstance(v, np.ndarray) else float(v) for v in raw)
        if name == "ball_max_average":
            a = a[:3] + (K._contig(np.sort(raw[3])),)
        fast, slow = getattr(K, f"{name}_numba"), getattr(K, f"{name}_numpy")
        t0 = time.perf_counter()
        ref = fast(*a)
        first = time.perf_counter() - t0
        t_fast = min(timeit.repeat(lambda: fast(*a), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*a), number=1, repeat=args.repeat))
        other = slow(*a)
        diff = float(np.max(np.abs(np.asarray(ref) - np.asarray(other)) / np.maximum(np.abs(np.asarray(other)), 1e-300)))
        print(f"{label:26s} {first:11.3f}s {t_fast:9.4f}s {t_slow:9.4f}s {t_slow / t_fast:7.1f}x {diff:13.2e}")
    if args.end_to_end:
        for flag in ("1", "0"):
            env = dict(os.environ, SPECBAND_NUMBA=flag)
            with tempfile.TemporaryDirectory() as out:
                cmd = [sys.executable, "-m", "specband", args.end_to_end, "--out", out]
                t0 = time.perf_counter()
                subprocess.run(cmd, env=env, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
                elapsed = time.perf_counter() - t0
            print(f"specband {args.end_to_end} with SPECBAND_NUMBA={flag}: {elapsed:.2f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
