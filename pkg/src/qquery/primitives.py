"""Simulated Grover-family search primitives and the BBHT failure analysis.

No amplitudes are tracked.  A Grover run with ``j`` iterations on a domain
with ``M`` of ``N`` marked elements succeeds with probability
``sin^2((2j+1) theta)``, ``theta = arcsin(sqrt(M/N))``; the outcome is then a
uniform solution, otherwise a uniform non-solution.  A run costs ``j + 1``
queries: ``j`` inside the iterations plus the final check of the outcome.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np
from scipy.optimize import brentq

from .oracle import FALSE, EpsilonBudget, Meter, Oracle, RngStream, _as_budget
from .stats import mean_halfwidth, wilson_interval

__all__ = [
    "GroverRunResult",
    "SearchOutcome",
    "BbhtConfig",
    "BBHT_ORIGINAL",
    "grover_run",
    "bbht",
    "bcwz",
    "bcwz_cost",
    "f_theta",
    "f_theta_closed",
    "m0_bound",
    "tan_fixed_points",
    "SweepRow",
    "lambda_sweep",
    "write_sweep_csv",
]

LAMBDA_PROVEN_MAX = 1.64


@dataclass(frozen=True)
class GroverRunResult:
    outcome: int
    success: bool
    charged_cost: int


@dataclass(frozen=True)
class SearchOutcome:
    result: object  # index or FALSE
    charged_cost: int
    rounds: int = 0

    @property
    def found(self) -> bool:
        return self.result is not FALSE


@dataclass(frozen=True)
class BbhtConfig:
    """Parameters of the BBHT loop.

    ``j_rule`` selects which integers ``j`` a round with non-integer bound
    ``m`` draws from: ``"floor"`` uses ``0..max(1, floor(m))-1``, ``"ceil"``
    uses every integer ``j < m``.
    """

    lam: float = 1.31
    m_init: float = 1.0
    cutoff_factor: float = 2.0
    j_rule: Literal["floor", "ceil"] = "floor"

    def __post_init__(self):
        if not 1.0 < self.lam < 2.0:
            raise ValueError(f"lambda must lie in (1, 2), got {self.lam}")
        if self.j_rule not in ("floor", "ceil"):
            raise ValueError(f"unknown j_rule {self.j_rule!r}")
        if self.m_init <= 0 or self.cutoff_factor <= 0:
            raise ValueError("m_init and cutoff_factor must be positive")

    @property
    def proven(self) -> bool:
        """Whether the failure bound derivation covers this lambda."""
        return self.lam < LAMBDA_PROVEN_MAX

    def j_bound(self, m: float) -> int:
        if self.j_rule == "floor":
            return max(1, math.floor(m))
        return max(1, math.ceil(m))

    def schedule(self, n: int) -> list[float]:
        """The sequence of ``m`` values visited on a domain of size ``n``."""
        ms = []
        m = self.m_init
        limit = self.cutoff_factor * math.sqrt(n)
        while m <= limit:
            ms.append(m)
            m *= self.lam
        return ms


BBHT_ORIGINAL = BbhtConfig(lam=8 / 7)


class _SearchSpace:
    """Snapshot of a binary predicate: what one primitive invocation sees."""

    __slots__ = ("mask", "n", "m", "theta", "_solutions")

    def __init__(self, mask: np.ndarray, meter: Meter | None):
        self.mask = mask
        self.n = int(mask.size)
        if self.n == 0:
            raise ValueError("cannot search an empty domain")
        if meter is not None:
            meter.peek(self.n)
        self._solutions = None
        self.m = int(np.count_nonzero(mask))
        self.theta = math.asin(math.sqrt(self.m / self.n))

    @property
    def solutions(self) -> np.ndarray:
        if self._solutions is None:
            self._solutions = np.flatnonzero(self.mask)
        return self._solutions

    def success_probability(self, j: int) -> float:
        if self.m == 0:
            return 0.0
        if self.m == self.n:
            return 1.0
        p = math.sin((2 * j + 1) * self.theta) ** 2
        # exact rotations (e.g. N=4, M=1, j=1) land within rounding of 1
        return 1.0 if p > 1.0 - 1e-12 else p

    def random_solution(self, rng: RngStream) -> int:
        return int(self.solutions[rng.below(self.m)])

    def random_non_solution(self, rng: RngStream) -> int:
        while True:
            i = rng.below(self.n)
            if not self.mask[i]:
                return i

    def run(self, j: int, rng: RngStream) -> tuple[int, bool]:
        if rng.random() < self.success_probability(j):
            return self.random_solution(rng), True
        return self.random_non_solution(rng), False


def _mask_of(oracle) -> np.ndarray:
    if isinstance(oracle, Oracle):
        return oracle.mask()
    return np.asarray(oracle, dtype=bool)


def grover_run(
    oracle: Oracle, j: int, rng: RngStream, meter: Meter | None = None
) -> GroverRunResult:
    """One run of Grover's algorithm with ``j`` iterations."""
    if j < 0:
        raise ValueError("j must be non-negative")
    space = _SearchSpace(_mask_of(oracle), meter)
    outcome, success = space.run(j, rng)
    cost = (j + 1) * oracle.query_weight
    if meter is not None:
        meter.charge(cost)
        meter.grover_runs += 1
    return GroverRunResult(outcome, success, cost)


def _bbht(
    space: _SearchSpace,
    rng: RngStream,
    config: BbhtConfig,
    meter: Meter | None,
    weight: int = 1,
    cost_cap: float = math.inf,
) -> SearchOutcome:
    limit = config.cutoff_factor * math.sqrt(space.n)
    m = config.m_init
    cost = 0
    rounds = 0
    result = FALSE
    while m <= limit and cost < cost_cap:
        j = rng.below(config.j_bound(m))
        outcome, success = space.run(j, rng)
        cost += (j + 1) * weight
        rounds += 1
        if success:
            result = outcome
            break
        m *= config.lam
    if meter is not None:
        meter.charge(cost)
        meter.grover_runs += rounds
    return SearchOutcome(result, cost, rounds)


def bbht(
    oracle: Oracle,
    rng: RngStream,
    config: BbhtConfig | None = None,
    meter: Meter | None = None,
) -> SearchOutcome:
    """Search for a solution without knowing how many there are.

    Runs Grover with a random number of iterations below a bound ``m`` that
    grows by a factor ``lambda`` per round, giving up once ``m`` exceeds
    ``2 sqrt(N)``.  Returns a :class:`SearchOutcome` whose ``result`` is a
    solution index or ``FALSE``.
    """
    config = config or BbhtConfig()
    if not config.proven:
        warnings.warn(
            f"lambda={config.lam} is above {LAMBDA_PROVEN_MAX}; the failure bound is not proven there",
            stacklevel=2,
        )
    space = _SearchSpace(_mask_of(oracle), meter)
    return _bbht(space, rng, config, meter, oracle.query_weight)


def bcwz_cost(n: int, budget: EpsilonBudget) -> int:
    """Charged queries of one BCWZ search (constant factor 1)."""
    return math.ceil(math.sqrt(n * max(1.0, budget.lg)))


def _bcwz(
    space: _SearchSpace,
    budget: EpsilonBudget,
    rng: RngStream,
    meter: Meter | None,
    weight: int = 1,
) -> SearchOutcome:
    cost = bcwz_cost(space.n, budget) * weight
    result = FALSE
    # with M = N the starting state is already all solutions: nothing can fail
    if space.m == space.n or (space.m > 0 and rng.random() >= budget.eps):
        result = space.random_solution(rng)
    if meter is not None:
        meter.charge(cost)
    return SearchOutcome(result, cost, 1)


def bcwz(
    oracle: Oracle,
    budget: EpsilonBudget | float,
    rng: RngStream,
    meter: Meter | None = None,
) -> SearchOutcome:
    """Search with a tunable failure probability ``1/eps_inv``.

    Always charges ``ceil(sqrt(N * max(1, lg eps_inv)))`` queries.  With
    ``0 < M < N`` it returns FALSE with probability ``eps``; with ``M = N``
    it always succeeds and with ``M = 0`` it always returns FALSE.
    """
    budget = _as_budget(budget)
    space = _SearchSpace(_mask_of(oracle), meter)
    return _bcwz(space, budget, rng, meter, oracle.query_weight)


# ---------------------------------------------------------------------------
# failure analysis


def f_theta(theta: float, m: int) -> float:
    """Average failure probability of one round with ``j`` uniform in ``[0, m)``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    j = np.arange(m)
    return float(np.mean(np.cos((2 * j + 1) * theta) ** 2))


def f_theta_closed(theta: float, m: int) -> float:
    """Closed form ``1/2 + sin(4 m theta) / (4 m sin(2 theta))``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    s = math.sin(2 * theta)
    if abs(s) < 1e-12:
        raise ValueError("closed form is singular where sin(2 theta) = 0")
    return 0.5 + math.sin(4 * m * theta) / (4 * m * s)


def m0_bound(n: int, m: int) -> float:
    """Round bound past which a BBHT round fails with probability <= 0.6."""
    if not 1 <= m <= n / 2:
        raise ValueError("the bound only holds for 1 <= M <= N/2")
    return 0.69 * math.sqrt(n / m)


def tan_fixed_points(count: int) -> list[float]:
    """First ``count`` positive roots of ``tan(x) = x``."""
    if count < 1:
        raise ValueError("count must be positive")
    # sin x - x cos x has the same roots and no poles
    g = lambda x: math.sin(x) - x * math.cos(x)
    return [
        brentq(g, k * math.pi, k * math.pi + math.pi / 2, xtol=1e-13)
        for k in range(1, count + 1)
    ]


@dataclass(frozen=True)
class SweepRow:
    lam: float
    mean_cost: float
    cost_ci95: float
    fail_rate: float
    fail_ci95: tuple[float, float]
    trials: int


def lambda_sweep(
    n: int,
    m: int,
    lambdas: Iterable[float],
    trials: int,
    rng: RngStream,
    j_rule: Literal["floor", "ceil"] = "floor",
) -> list[SweepRow]:
    """Mean cost and failure rate of BBHT for each growth factor."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 1 <= m <= n:
        raise ValueError("need 1 <= M <= N")
    mask = np.zeros(n, dtype=bool)
    mask[:m] = True
    space = _SearchSpace(mask, None)
    rows = []
    for i, lam in enumerate(lambdas):
        config = BbhtConfig(lam=float(lam), j_rule=j_rule)
        stream = rng.child(i)
        costs = np.empty(trials)
        failures = 0
        for t in range(trials):
            out = _bbht(space, stream, config, None)
            costs[t] = out.charged_cost
            failures += not out.found
        rows.append(
            SweepRow(
                lam=float(lam),
                mean_cost=float(costs.mean()),
                cost_ci95=mean_halfwidth(costs),
                fail_rate=failures / trials,
                fail_ci95=wilson_interval(failures, trials),
                trials=trials,
            )
        )
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["lambda", "mean_cost", "cost_ci95", "fail_rate", "fail_ci95", "trials"])
    for r in rows:
        half = (r.fail_ci95[1] - r.fail_ci95[0]) / 2
        writer.writerow(
            [f"{r.lam:.4f}", f"{r.mean_cost:.4f}", f"{r.cost_ci95:.4f}",
             f"{r.fail_rate:.6f}", f"{half:.6f}", r.trials]
        )
