"""Consensus over Erdos-Renyi random graphs."""

from ._core import (
    exhaustive_expected_power,
    expected_decrease_bound,
    expected_laplacian_power,
    kappa_coefficients,
    moment_set,
    mu,
    prob_experiment,
    run_cli,
    sample_laplacian,
    simulate,
    tail_probability_bound,
    vdiff_experiment,
)

__all__ = [
    "exhaustive_expected_power",
    "expected_decrease_bound",
    "expected_laplacian_power",
    "kappa_coefficients",
    "moment_set",
    "mu",
    "prob_experiment",
    "run_cli",
    "sample_laplacian",
    "simulate",
    "tail_probability_bound",
    "vdiff_experiment",
]
