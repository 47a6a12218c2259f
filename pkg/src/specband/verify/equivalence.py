"""Norm-equivalence experiments over a corpus."""

from __future__ import annotations

import numpy as np

from ..dyadic import DyadicSystem
from ..grid import lp_norm, mixed_norm
from ..maximal import peetre_sup
from ..operator import EigenDecomposition
from ..spaces import SpaceParams, dyadic_pieces, sobolev_ratio, space_norm, square_function_norm
from .corpus import Corpus
from .report import VerificationReport


def _need_corpus(corpus):
    if corpus is None or len(corpus) == 0:
        raise ValueError("corpus is empty")


def equivalence_experiment(
    corpus: Corpus,
    ed: EigenDecomposition,
    system: DyadicSystem,
    p_list=(1.5, 2.0, 3.0, 4.0),
    ceiling: float = 10.0,
    config: dict | None = None,
) -> VerificationReport:
    """ρ(f) = ||f||_p / ||(Σ|φ_j(H)f|^2)^{1/2}||_p; passes iff max ρ / min ρ <= ceiling per p."""
    _need_corpus(corpus)
    for p in p_list:
        if not 1 < p < np.inf:
            raise ValueError(f"Littlewood-Paley equivalence needs 1 < p < inf, got {p}")
    grid = ed.grid
    report = VerificationReport("equivalence", config=dict(config or {}))
    stats = report.table("spread", ["p", "rho_min", "rho_max", "spread", "ceiling", "passed"])
    rows = report.table("rho", ["p", "member", "norm_p", "square_norm", "rho"])
    for p in p_list:
        rhos = []
        for m, f in enumerate(corpus):
            a = lp_norm(f, p, grid)
            b = square_function_norm(f, system, ed, p)
            rows.add(p, m, a, b, a / b)
            rhos.append(a / b)
        spread = max(rhos) / min(rhos)
        ok = spread <= ceiling
        stats.add(p, min(rhos), max(rhos), spread, ceiling, ok)
        report.check(f"spread_p{p:g}", ok, spread, ceiling)
    return report


def parseval_check(
    corpus: Corpus,
    ed: EigenDecomposition,
    system: DyadicSystem,
    tol: float = 1e-8,
    config: dict | None = None,
) -> VerificationReport:
    """Besov norm with α = 0, p = q = 2 against ||f||_2 (system with Σφ_j^2 = 1)."""
    _need_corpus(corpus)
    report = VerificationReport("parseval", config=dict(config or {}))
    rows = report.table("parseval", ["member", "norm_2", "besov_22", "rel_error"])
    params = SpaceParams(alpha=0.0, p=2.0, q=2.0)
    worst = 0.0
    for m, f in enumerate(corpus):
        a = lp_norm(f, 2.0, ed.grid)
        b = space_norm(f, system, ed, params, "besov", "plain")
        err = abs(b - a) / a
        rows.add(m, a, b, err)
        worst = max(worst, err)
    report.summary["max_rel_error"] = worst
    report.check("parseval", worst <= tol, worst, tol)
    return report


def characterization_check(
    corpus: Corpus,
    ed: EigenDecomposition,
    system: DyadicSystem,
    pq_list=((2.0, 2.0), (4.0, 2.0)),
    s_offset: float = 1.0,
    alpha: float = 0.0,
    ceiling: float = 50.0,
    config: dict | None = None,
) -> VerificationReport:
    """Maximal-variant over plain F-norm with s = n/p + s_offset.

    The lower bound 1 is checked exactly: φ*_{j,s} f >= |φ_j(H) f| at every
    node and every ratio >= 1 with no tolerance.
    """
    _need_corpus(corpus)
    grid = ed.grid
    n = grid.n
    report = VerificationReport("characterization", config=dict(config or {}))
    rows = report.table("characterization", ["p", "q", "s", "member", "plain", "maximal", "ratio"])
    stats = report.table("bounds", ["p", "q", "s", "ratio_min", "ratio_max"])
    pointwise_ok = True
    all_ok = True
    for p, q in pq_list:
        s = n / p + s_offset
        params = SpaceParams(alpha=alpha, p=p, q=q, s=s)
        if not s > params.threshold("triebel_lizorkin", n):
            raise ValueError(f"s={s} is below the threshold for (p, q)=({p}, {q})")
        ratios = []
        for m, f in enumerate(corpus):
            js, stack = dyadic_pieces(f, system, ed)
            a = np.abs(stack)
            star = np.stack([peetre_sup(row, grid, 2.0 ** (j / 2.0), s) for j, row in zip(js, a)])
            pointwise_ok &= bool(np.all(star >= a))
            plain = mixed_norm(a, p, q, grid, "Lp_of_lq", alpha, js)
            maxi = mixed_norm(star, p, q, grid, "Lp_of_lq", alpha, js)
            ratios.append(maxi / plain)
            rows.add(p, q, s, m, plain, maxi, maxi / plain)
        stats.add(p, q, s, min(ratios), max(ratios))
        all_ok &= min(ratios) >= 1.0 and max(ratios) <= ceiling
        report.summary[f"C_p{p:g}_q{q:g}"] = max(ratios)
    report.check("pointwise_lower_bound", pointwise_ok, None, None)
    report.check("ratio_in_[1,C]", all_ok, max(v for k, v in report.summary.items() if k.startswith("C_")), ceiling)
    return report


def independence_check(
    corpus: Corpus,
    ed: EigenDecomposition,
    system_a: DyadicSystem,
    system_b: DyadicSystem,
    p_list=(1.5, 2.0, 4.0),
    ceiling: float = 10.0,
    config: dict | None = None,
) -> VerificationReport:
    """Square-function norms from two admissible profiles; C = max(max r, 1/min r)."""
    _need_corpus(corpus)
    report = VerificationReport("independence", config=dict(config or {}))
    rows = report.table("independence", ["p", "member", "norm_a", "norm_b", "ratio"])
    ratios = []
    for p in p_list:
        for m, f in enumerate(corpus):
            a = square_function_norm(f, system_a, ed, p)
            b = square_function_norm(f, system_b, ed, p)
            rows.add(p, m, a, b, a / b)
            ratios.append(a / b)
    C = max(max(ratios), 1.0 / min(ratios))
    report.summary.update(C=C, systems=[system_a.name, system_b.name])
    report.check("equivalent", C <= ceiling, C, ceiling)
    return report


def sobolev_experiment(
    corpus: Corpus,
    ed: EigenDecomposition,
    system: DyadicSystem,
    s: float = 1.0,
    p: float = 2.0,
    ceiling: float | None = None,
    config: dict | None = None,
) -> VerificationReport:
    """Exploratory: spread of sobolev_ratio over the corpus (default ceiling 4^{2s})."""
    _need_corpus(corpus)
    ceiling = 4.0 ** (2 * s) if ceiling is None else ceiling
    report = VerificationReport("sobolev", config=dict(config or {}))
    rows = report.table("sobolev", ["member", "s", "p", "ratio"])
    vals = []
    for m, f in enumerate(corpus):
        r = sobolev_ratio(f, system, ed, s, p)
        rows.add(m, s, p, r)
        vals.append(r)
    spread = max(vals) / min(vals)
    report.summary.update(spread=spread, exploratory=True)
    report.notes.append("exploratory: |∂V| is unbounded for the Hermite potential")
    report.check("spread", spread <= ceiling, spread, ceiling)
    return report
