"""Monte-Carlo experiment engine and classical reference answers."""

from __future__ import annotations

from .core import (
    CSV_COLUMNS,
    ScalingFit,
    TrialStats,
    estimate_failure_bound,
    fit_json,
    fit_power_law,
    fit_scaling,
    get_experiment,
    run_trials,
    write_stats_csv,
)
from .experiments import REGISTRY, Experiment, TrialOutcome, register

__all__ = [
    "CSV_COLUMNS",
    "Experiment",
    "REGISTRY",
    "ScalingFit",
    "TrialOutcome",
    "TrialStats",
    "estimate_failure_bound",
    "fit_json",
    "fit_power_law",
    "fit_scaling",
    "get_experiment",
    "register",
    "run_trials",
    "write_stats_csv",
]
