"""Small statistics helpers shared by the sweep and the harness."""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import binomtest

Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("need at least one trial")
    ci = binomtest(int(successes), int(trials)).proportion_ci(0.95, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


def mean_halfwidth(values) -> float:
    """Normal-approximation 95% half-width of a sample mean."""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        return 0.0
    return Z95 * float(arr.std(ddof=1)) / math.sqrt(arr.size)


def binomial_se(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)
