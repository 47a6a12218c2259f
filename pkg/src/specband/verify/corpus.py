"""Deterministic test-function corpora on a grid."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..operator import EigenDecomposition

CORPUS_KINDS = ("band", "gaussian", "eigen")


@dataclass(frozen=True)
class Corpus:
    kind: str
    seed: int
    band: tuple[float, float] | None
    members: tuple[np.ndarray, ...] = field(repr=False)
    metadata: tuple[dict, ...] = field(default=(), repr=False)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]


def band_indices(ed: EigenDecomposition, band) -> np.ndarray:
    lo, hi = band
    idx = np.nonzero((ed.values >= lo) & (ed.values <= hi))[0]
    if idx.size == 0:
        raise ValueError(f"no eigenvalues inside the band [{lo}, {hi}]")
    return idx


def make_corpus(
    ed: EigenDecomposition,
    kind: str = "band",
    count: int = 50,
    seed: int = 0,
    band: tuple[float, float] | None = (0.5, 100.0),
) -> Corpus:
    """Unit-L2 test functions, reproducible from ``seed``.

    band     random normal eigen-coefficients on eigenvalues inside ``band``
    eigen    combinations of one to three eigenfunctions from ``band``
             (a single-eigenvalue band yields ±e_k)
    gaussian exp(-a|x - x0|^2), a in [0.5, 2], x0 in [-2, 2]^n; these are
             grid-independent and only approximately band-limited
    """
    if kind not in CORPUS_KINDS:
        raise ValueError(f"corpus kind must be one of {CORPUS_KINDS}, got {kind!r}")
    if count <= 0:
        raise ValueError("corpus must have at least one member")
    rng = np.random.default_rng(seed)
    grid = ed.grid
    members, meta = [], []
    if kind == "gaussian":
        for _ in range(count):
            a = float(rng.uniform(0.5, 2.0))
            x0 = rng.uniform(-2.0, 2.0, size=grid.n)
            f = np.exp(-a * np.sum((grid.points - x0) ** 2, axis=1))
            f[~grid.interior] = 0.0
            members.append(f / np.sqrt(grid.inner(f, f).real))
            meta.append({"a": a, "x0": x0.tolist()})
        return Corpus(kind, seed, None, tuple(members), tuple(meta))

    idx = band_indices(ed, band)
    for _ in range(count):
        coeffs = np.zeros(len(ed.values))
        if kind == "band":
            c = rng.standard_normal(idx.size)
            coeffs[idx] = c
            used = idx
        else:
            k = int(rng.integers(1, min(3, idx.size) + 1))
            used = np.sort(rng.choice(idx, size=k, replace=False))
            coeffs[used] = rng.standard_normal(k)
            if k == 1:
                coeffs[used] = np.sign(coeffs[used])
        coeffs /= np.linalg.norm(coeffs)
        members.append(ed.synthesize(coeffs))
        meta.append({"indices": [int(i) for i in used]} if kind == "eigen" else {})
    return Corpus(kind, seed, tuple(map(float, band)), tuple(members), tuple(meta))
