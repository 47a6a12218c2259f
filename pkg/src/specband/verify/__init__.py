"""Experiment harness: fitted constants and lemma/theorem checks."""

from .corpus import Corpus, make_corpus
from .decay import fit_decay_constants
from .equivalence import (
    characterization_check,
    equivalence_experiment,
    independence_check,
    parseval_check,
    sobolev_experiment,
)
from .gaussian import gaussian_bound_fit, hermite_samples, mehler_check, samples_from_kernels
from .hebisch import hebisch_check, sobolev_norm
from .lemmas import hl_resolution_check, maximal_lemma_check
from .report import SCHEMA_VERSION, Table, VerificationReport, emit_report

__all__ = [
    "Corpus",
    "SCHEMA_VERSION",
    "Table",
    "VerificationReport",
    "characterization_check",
    "emit_report",
    "equivalence_experiment",
    "fit_decay_constants",
    "gaussian_bound_fit",
    "hebisch_check",
    "hermite_samples",
    "hl_resolution_check",
    "independence_check",
    "make_corpus",
    "maximal_lemma_check",
    "mehler_check",
    "parseval_check",
    "samples_from_kernels",
    "sobolev_experiment",
    "sobolev_norm",
]
