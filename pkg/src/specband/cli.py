"""specband command line: config in, VerificationReport files out.

Exit status: 0 when every check passes, 1 when a check fails (reports are
still written), 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import logging
import sys
from functools import cached_property

import numpy as np

from . import config as _config
from .calculus import band_guard
from .dyadic import BumpProfile, IndicatorProfile, make_system, telescoping_base, validate_system, without_plateau
from .grid import make_grid
from .operator import EigensolverError, assemble, eigendecompose, load_tabulated, make_potential
from .verify import (
    VerificationReport,
    characterization_check,
    emit_report,
    equivalence_experiment,
    fit_decay_constants,
    gaussian_bound_fit,
    hebisch_check,
    hermite_samples,
    hl_resolution_check,
    independence_check,
    make_corpus,
    maximal_lemma_check,
    mehler_check,
    parseval_check,
    sobolev_experiment,
)
from .verify.corpus import Corpus

log = logging.getLogger("specband")

COMMANDS = ("validate-dyadic", "decay", "mehler", "gaussian-bound", "hebisch", "equivalence", "maximal", "sobolev")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Context:
    """Objects shared by the experiments of one run, built on first use."""

    def __init__(self, cfg: dict):
        self.cfg = cfg

    @property
    def kind(self) -> str:
        return self.cfg["potential"]["kind"]

    def potential(self, n: int):
        p = self.cfg["potential"]
        if p["kind"] == "tabulated":
            return load_tabulated(p["path"])
        return make_potential(p["kind"], nu=p.get("nu"), n=n)

    def decompose(self, P: int):
        g = self.cfg["grid"]
        grid = make_grid(g["n"], g["L"], P)
        return eigendecompose(assemble(grid, self.potential(g["n"]), g["order"]))

    @cached_property
    def ed(self):
        return self.decompose(self.cfg["grid"]["P"])

    def system(self, sharpness=None, normalize=None, profile=None):
        d = self.cfg["dyadic"]
        profile = profile or BumpProfile(d["sharpness"] if sharpness is None else sharpness)
        return make_system(profile, d["j_min"], d["j_max"], d["k_max"], normalize)

    @cached_property
    def plain(self):
        return self.system()

    @cached_property
    def corpus(self) -> Corpus:
        c = self.cfg["corpus"]
        return make_corpus(self.ed, c["kind"], c["count"], c["seed"], tuple(c["band"]))

    def guard(self, label: str):
        band_guard(self.ed, 2.0 ** self.cfg["dyadic"]["j_max"], label)


def _need_hermite(ctx: Context, name: str):
    if ctx.kind != "hermite":
        raise UsageError(f"{name} compares against the closed-form Hermite kernel; potential is {ctx.kind!r}")


def run_validate_dyadic(ctx: Context) -> list[VerificationReport]:
    d = ctx.cfg["dyadic"]
    system = ctx.plain
    if ctx.cfg["negative_control"]:
        system = without_plateau(system)
    lam_range = d["validate_range"] or system.covered_range
    v = validate_system(system, tuple(lam_range), d["sample_density"], d["k_max"], d["sum_floor"])
    report = VerificationReport("validate_dyadic", config=ctx.cfg)
    tab = report.table("constants", ["k", "c_k"])
    for k, c in sorted(v.constants.items()):
        tab.add(k, c)
    report.summary.update(v.as_dict(), system=system.name)
    report.check("support", v.support_violations == 0, v.support_violations, 0)
    report.check("sum_lower_bound", v.sum_bounds[0] > v.floor, v.sum_bounds[0], v.floor)
    return [report]


def run_decay(ctx: Context) -> list[VerificationReport]:
    e = ctx.cfg["experiments"]["decay"]
    system = ctx.system(profile=IndicatorProfile()) if ctx.cfg["negative_control"] else ctx.plain
    ctx.guard("decay")
    # high-energy-only claim for Pöschl-Teller: j < 0 rows are exploratory
    below = 0 if ctx.kind == "poschl_teller" else None
    return [fit_decay_constants(ctx.ed, system, e["N_list"], e["alpha_list"], e["ceiling"], below, config=ctx.cfg)]


def run_mehler(ctx: Context) -> list[VerificationReport]:
    _need_hermite(ctx, "mehler")
    e = ctx.cfg["experiments"]["mehler"]
    return [mehler_check(ctx.ed, e["t_list"], e["window"], e["tol"], e["grad_tol"], config=ctx.cfg)]


def run_gaussian_bound(ctx: Context) -> list[VerificationReport]:
    _need_hermite(ctx, "gaussian-bound")
    e = ctx.cfg["experiments"]["gaussian_bound"]
    n = ctx.cfg["grid"]["n"]
    t_grid = np.round(np.geomspace(e["t_min"], e["t_max"], e["t_count"]), 12)
    out = []
    for alpha in (0, 1):
        samples = hermite_samples(t_grid, alpha, n, e["window"], e["points"])
        out.append(gaussian_bound_fit(samples, alpha, n, t0_min=e["t0_min"], c_max=e["c_max"], config=ctx.cfg))
    return out


def run_hebisch(ctx: Context) -> list[VerificationReport]:
    e = ctx.cfg["experiments"]["hebisch"]
    if e["g"] == "phi":
        g = telescoping_base(BumpProfile(ctx.cfg["dyadic"]["sharpness"]))
    else:
        psi = BumpProfile(ctx.cfg["dyadic"]["sharpness"])

        def g(x):
            return psi(np.asarray(x, dtype=float) / 10.0)

    top = 2.0 if e["g"] == "phi" else 10.0  # right end of supp g
    band_guard(ctx.ed, top * 2.0 ** e["j_max"], "hebisch")
    js = range(e["j_min"], e["j_max"] + 1)
    return [hebisch_check(ctx.ed, g, b, e["s_H"], js, e["ceiling"], config=ctx.cfg) for b in e["beta_list"]]


def run_equivalence(ctx: Context) -> list[VerificationReport]:
    e = ctx.cfg["experiments"]["equivalence"]
    ctx.guard("equivalence")
    l2 = ctx.system(normalize="l2")
    alt = ctx.system(sharpness=ctx.cfg["dyadic"]["alt_sharpness"])
    return [
        equivalence_experiment(ctx.corpus, ctx.ed, ctx.plain, e["p_list"], e["ceiling"], config=ctx.cfg),
        parseval_check(ctx.corpus, ctx.ed, l2, e["parseval_tol"], config=ctx.cfg),
        independence_check(
            ctx.corpus, ctx.ed, ctx.plain, alt, e["independence_p_list"], e["independence_ceiling"], config=ctx.cfg
        ),
    ]


def run_maximal(ctx: Context) -> list[VerificationReport]:
    e = ctx.cfg["experiments"]["maximal"]
    c = ctx.cfg["corpus"]
    ctx.guard("maximal")
    sub = ctx.corpus
    if e["corpus_count"] < len(sub):
        sub = Corpus(sub.kind, sub.seed, sub.band, sub.members[: e["corpus_count"]], sub.metadata[: e["corpus_count"]])
    ceilings = {k: e[f"ceiling_{k}"] for k in ("R1", "R2", "C_p", "C_pq")}
    lemma = maximal_lemma_check(
        sub, ctx.ed, ctx.plain, e["r_list"], e["p_list"], e["s_bernstein"], e["q"], ceilings, config=ctx.cfg
    )
    char = characterization_check(
        ctx.corpus, ctx.ed, ctx.plain, [tuple(pq) for pq in e["pq_list"]], e["s_offset"],
        ceiling=e["char_ceiling"], config=ctx.cfg,
    )
    # same analytic functions sampled at several resolutions
    pairs = []
    for P in e["resolution_P"]:
        ed = ctx.ed if P == ctx.cfg["grid"]["P"] else ctx.decompose(P)
        pairs.append((ed.grid, make_corpus(ed, "gaussian", e["corpus_count"], c["seed"], None)))
    res = hl_resolution_check(pairs, e["p_list"], e["stability_tol"], config=ctx.cfg)
    return [lemma, char, res]


def run_sobolev(ctx: Context) -> list[VerificationReport]:
    e = ctx.cfg["experiments"]["sobolev"]
    ctx.guard("sobolev")
    return [sobolev_experiment(ctx.corpus, ctx.ed, ctx.plain, e["s"], e["p"], e["ceiling"], config=ctx.cfg)]


RUNNERS = {
    "validate-dyadic": run_validate_dyadic,
    "decay": run_decay,
    "mehler": run_mehler,
    "gaussian-bound": run_gaussian_bound,
    "hebisch": run_hebisch,
    "equivalence": run_equivalence,
    "maximal": run_maximal,
    "sobolev": run_sobolev,
}


def _applicable(ctx: Context, name: str) -> str | None:
    """Reason to skip ``name`` inside ``all``, or None."""
    if name in ("mehler", "gaussian-bound") and ctx.kind != "hermite":
        return "closed-form kernel is Hermite only"
    if name == "hebisch" and not ctx.potential(ctx.cfg["grid"]["n"]).nonnegative:
        return "weighted L1 bound needs V >= 0"
    return None


def run_command(name: str, cfg: dict, output: dict, stamp: bool = False, stream=None) -> int:
    """Run one experiment (or all of them) and write its reports."""
    stream = sys.stdout if stream is None else stream
    if name != "all" and name not in RUNNERS:
        raise UsageError(f"unknown command {name!r}")
    ctx = Context(cfg)
    names = COMMANDS if name == "all" else (name,)
    status = EXIT_OK
    timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds") if stamp else None
    for exp in names:
        if name == "all":
            why = _applicable(ctx, exp)
            if why:
                print(f"SKIP {exp}: {why}", file=stream)
                continue
        try:
            reports = RUNNERS[exp](ctx)
        except (UsageError, ValueError) as exc:
            raise UsageError(f"{exp}: {exc}") from None
        except EigensolverError as exc:
            report = VerificationReport(exp.replace("-", "_"), config=cfg, passed=False)
            report.notes.append(f"eigensolver failed: {exc}")
            reports = [report]
        for report in reports:
            report.seed = cfg["corpus"]["seed"]
            report.timestamp = timestamp
            paths = emit_report(report, output["format"], output["dir"])
            mark = "PASS" if report.passed else "FAIL"
            print(f"{mark} {report.experiment} -> {', '.join(str(p) for p in paths)}", file=stream)
            if not report.passed:
                status = EXIT_FAIL
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="specband",
        description="Numerical Littlewood-Paley checks for Schrödinger operators.",
        epilog="Flag values override the config file, which overrides built-in defaults.",
    )
    ap.add_argument("command", choices=COMMANDS + ("all",))
    ap.add_argument("--config", help="JSON run configuration (default: built-in Hermite defaults)")
    ap.add_argument("--out", help="output directory (default: ./reports)")
    ap.add_argument("--seed", type=int, help="corpus RNG seed, 0 <= seed < 2**64")
    ap.add_argument("--format", choices=("json", "csv", "both"), help="report format (default: json)")
    ap.add_argument("--negative-control", action="store_true", help="swap in a deliberately broken dyadic system")
    ap.add_argument("--stamp", action="store_true", help="record the wall-clock time in reports (breaks byte-identity)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            cfg, output = _config.load_config(args.config)
        else:
            cfg, output = _config.resolve({"potential": "hermite"})
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise UsageError("--seed must satisfy 0 <= seed < 2**64")
            cfg["corpus"]["seed"] = args.seed
        if args.negative_control:
            cfg["negative_control"] = True
        if args.out:
            output["dir"] = args.out
        if args.format:
            output["format"] = args.format
        return run_command(args.command, cfg, output, args.stamp)
    except (_config.ConfigError, UsageError) as exc:
        print(f"specband: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
