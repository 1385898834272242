"""Trial runner, statistics and log-log scaling fits."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from ..oracle import RngStream
from ..stats import wilson_interval
from .experiments import REGISTRY, Experiment

CSV_COLUMNS = [
    "experiment", "size", "param", "trials", "fail_rate", "fail_lo", "fail_hi",
    "cost_mean", "cost_sd", "cost_p50", "cost_p95",
]


@dataclass
class TrialStats:
    experiment: str
    trials: int
    failures: int
    fail_rate: float
    fail_ci95: tuple[float, float]
    cost_mean: float
    cost_sd: float
    cost_p50: float
    cost_p95: float
    hard_violations: int = 0
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def row(self, size_param: str = "n") -> dict:
        size = self.params.get(size_param)
        rest = {k: v for k, v in sorted(self.params.items()) if k != size_param and v is not None}
        return {
            "experiment": self.experiment,
            "size": "" if size is None else size,
            "param": ";".join(f"{k}={v}" for k, v in rest.items()),
            "trials": self.trials,
            "fail_rate": f"{self.fail_rate:.6g}",
            "fail_lo": f"{self.fail_ci95[0]:.6g}",
            "fail_hi": f"{self.fail_ci95[1]:.6g}",
            "cost_mean": f"{self.cost_mean:.6g}",
            "cost_sd": f"{self.cost_sd:.6g}",
            "cost_p50": f"{self.cost_p50:.6g}",
            "cost_p95": f"{self.cost_p95:.6g}",
        }


@dataclass
class ScalingFit:
    points: list[tuple[float, float]]
    slope: float
    intercept: float
    r2: float

    def summary(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2}


def get_experiment(experiment: str | Experiment) -> Experiment:
    if isinstance(experiment, Experiment):
        return experiment
    try:
        return REGISTRY[experiment]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown experiment {experiment!r}; known: {known}") from None


def run_trials(experiment: str | Experiment, trials: int, seed: int, **params) -> TrialStats:
    """Run ``trials`` independent trials on streams ``(seed, 0..trials-1)``."""
    exp = get_experiment(experiment)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    unknown = set(params) - set(exp.defaults)
    if unknown:
        raise ValueError(f"{exp.name} has no parameter(s) {sorted(unknown)}")
    p = {**exp.defaults, **params}
    costs = np.empty(trials)
    failures = 0
    hard_bad = 0
    extra: dict = {}
    for i in range(trials):
        out = exp.trial(RngStream(seed, i), p)
        costs[i] = out.cost
        failures += bool(out.failed)
        hard_bad += not out.hard_ok
        for k, v in out.extra.items():
            extra[k] = extra.get(k, 0) + v
    return TrialStats(
        experiment=exp.name,
        trials=trials,
        failures=failures,
        fail_rate=failures / trials,
        fail_ci95=wilson_interval(failures, trials),
        cost_mean=float(costs.mean()),
        cost_sd=float(costs.std(ddof=1)) if trials > 1 else 0.0,
        cost_p50=float(np.percentile(costs, 50)),
        cost_p95=float(np.percentile(costs, 95)),
        hard_violations=hard_bad,
        params=p,
        extra=extra,
    )


def fit_power_law(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least-squares line through ``(log2 size, log2 cost)``."""
    if len(points) < 3:
        raise ValueError("a scaling fit needs at least 3 sizes")
    x = np.log2([s for s, _ in points])
    y = np.log2([c for _, c in points])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if total == 0 else max(0.0, 1.0 - float((resid**2).sum()) / total)
    return ScalingFit([(float(s), float(c)) for s, c in points], float(slope), float(intercept), r2)


def fit_scaling(
    experiment: str | Experiment,
    sizes: Sequence[int],
    trials_per_size: int,
    seed: int,
    **params,
) -> ScalingFit:
    """Mean charged cost at each size, then a log-log fit.

    A parameter given as a callable is evaluated at each size, e.g.
    ``m=lambda n: n // 4``.
    """
    exp = get_experiment(experiment)
    if len(sizes) < 3:
        raise ValueError("a scaling fit needs at least 3 sizes")
    points = []
    for k, size in enumerate(sizes):
        p = {key: (val(size) if callable(val) else val) for key, val in params.items()}
        p[exp.size_param] = size
        stats = run_trials(exp, trials_per_size, seed + k, **p)
        points.append((size, stats.cost_mean))
    return fit_power_law(points)


def estimate_failure_bound(stats: TrialStats, bound: float) -> bool:
    """True iff the observed failure rate is consistent with being at most ``bound``."""
    if not 0.0 <= bound <= 1.0:
        raise ValueError("bound must lie in [0, 1]")
    return stats.fail_ci95[0] <= bound


def write_stats_csv(stats: Sequence[TrialStats], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for s in stats:
        w.writerow(s.row(get_experiment(s.experiment).size_param))


def fit_json(fit: ScalingFit) -> str:
    return json.dumps(fit.summary(), sort_keys=True)
