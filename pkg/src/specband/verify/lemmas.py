"""Bernstein, Peetre-vs-Hardy-Littlewood and maximal-inequality constants."""

from __future__ import annotations

import numpy as np

from ..dyadic import DyadicSystem
from ..grid import lp_norm
from ..maximal import hl_maximal, peetre_sup
from ..operator import EigenDecomposition
from ..spaces import dyadic_pieces
from .corpus import Corpus
from .report import VerificationReport

# pieces whose sup is below this fraction of the member's sup count as annihilated
DEGENERATE_RTOL = 1e-10


def _ratio_max(num, den):
    """max num/den over nodes where den is not negligible (0/0 excluded)."""
    ok = den > DEGENERATE_RTOL * den.max() if den.max() > 0 else np.zeros_like(den, dtype=bool)
    if not np.any(ok):
        return None
    return float(np.max(num[ok] / den[ok]))


def maximal_lemma_check(
    corpus: Corpus,
    ed: EigenDecomposition,
    system: DyadicSystem,
    r_list=(1.0, 2.0),
    p_list=(1.5, 2.0, 3.0, 4.0, float("inf")),
    s_bernstein: float = 2.0,
    q: float = 2.0,
    ceilings: dict | None = None,
    config: dict | None = None,
) -> VerificationReport:
    """Three constant tables; passes iff each stays under its ceiling for all j.

    R1(j, f) = max_x φ**_{j,s} f / (2^{j/2} φ*_{j,s} f)
    R2(j, f, r) = max_x φ*_{j,n/r} f / [M(|φ_j(H) f|^r)]^{1/r}
    C_p(f) = ||M f||_p / ||f||_p,  C_pq(f) with the family {φ_j(H) f}
    """
    ceilings = {"R1": 25.0, "R2": 25.0, "C_p": 10.0, "C_pq": 10.0, **(ceilings or {})}
    for r in r_list:
        if not r > 0:
            raise ValueError("r must be positive")
    for p in p_list:
        if not p > 1:
            raise ValueError("maximal inequality needs p > 1")
    grid = ed.grid
    n = grid.n
    report = VerificationReport("maximal", config=dict(config or {}))
    t1 = report.table("bernstein", ["j", "member", "R1"])
    t2 = report.table("peetre_hl", ["j", "member", "r", "R2"])
    t3 = report.table("hl_norms", ["p", "member", "C_p"])
    t4 = report.table("vector_hl", ["p", "q", "member", "C_pq"])
    for m, f in enumerate(corpus):
        js, stack = dyadic_pieces(f, system, ed)
        fmax = np.max(np.abs(f))
        for j, g in zip(js, stack):
            j = int(j)
            a = np.abs(g)
            if a.max() <= DEGENERATE_RTOL * fmax:
                continue  # φ_j annihilates f
            scale = 2.0 ** (j / 2.0)
            star = peetre_sup(a, grid, scale, s_bernstein)
            grad = np.sqrt(np.sum(grid.gradient(g) ** 2, axis=0))
            star2 = peetre_sup(grad, grid, scale, s_bernstein)
            R1 = _ratio_max(star2, scale * star)
            if R1 is not None:
                t1.add(j, m, R1)
            for r in r_list:
                star_r = peetre_sup(a, grid, scale, n / r)
                M = hl_maximal(a**r, grid) ** (1.0 / r)
                R2 = _ratio_max(star_r, M)
                if R2 is not None:
                    t2.add(j, m, r, R2)
        Mf = hl_maximal(f, grid)
        for p in p_list:
            t3.add(p, m, lp_norm(Mf, p, grid) / lp_norm(f, p, grid))
        live = [g for g in stack if np.max(np.abs(g)) > DEGENERATE_RTOL * fmax]
        if live:
            fam = np.abs(np.stack(live))
            Mfam = np.stack([hl_maximal(g, grid) for g in fam])
            for p in p_list:
                if np.isinf(p):
                    continue
                num = lp_norm(np.sum(Mfam**q, axis=0) ** (1.0 / q), p, grid)
                den = lp_norm(np.sum(fam**q, axis=0) ** (1.0 / q), p, grid)
                t4.add(p, q, m, num / den)

    def top(table, col):
        vals = table.column(col)
        return float(max(vals)) if vals else float("nan")

    stats = {"R1": top(t1, "R1"), "R2": top(t2, "R2"), "C_p": top(t3, "C_p"), "C_pq": top(t4, "C_pq")}
    # per-j maxima for R1 / R2 (uniformity in j)
    for name, table, col in (("R1", t1, "R1"), ("R2", t2, "R2")):
        per_j = {}
        for rec in table.records():
            per_j[rec["j"]] = max(per_j.get(rec["j"], 0.0), rec[col])
        report.summary[f"{name}_per_j"] = {str(k): v for k, v in sorted(per_j.items())}
    for name, value in stats.items():
        report.summary[name] = value
        report.check(name, bool(np.isfinite(value) and value <= ceilings[name]), value, ceilings[name])
    return report


def hl_operator_norms(corpus: Corpus, grid, p_list) -> dict[float, float]:
    """max over the corpus of ||M f||_p / ||f||_p, per p."""
    out = {}
    for p in p_list:
        out[p] = max(lp_norm(hl_maximal(f, grid), p, grid) / lp_norm(f, p, grid) for f in corpus)
    return out


def hl_resolution_check(corpora, p_list=(1.5, 2.0, 3.0, 4.0), tolerance: float = 0.2, config=None) -> VerificationReport:
    """Empirical C_p on the same (grid-independent) functions at several resolutions.

    ``corpora`` is a sequence of (grid, corpus) pairs; passes iff every C_p is
    within ``tolerance`` (relative) of its value on the first grid.
    """
    report = VerificationReport("maximal_resolution", config=dict(config or {}))
    tab = report.table("resolution", ["P", "p", "C_p"])
    base = None
    worst = 0.0
    for grid, corpus in corpora:
        norms = hl_operator_norms(corpus, grid, p_list)
        for p, c in norms.items():
            tab.add(grid.P, p, c)
        if base is None:
            base = norms
        else:
            worst = max(worst, max(abs(norms[p] / base[p] - 1.0) for p in p_list))
    report.summary["max_relative_change"] = worst
    report.check("stable", worst <= tolerance, worst, tolerance)
    return report
