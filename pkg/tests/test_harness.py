from __future__ import annotations

import io
import json
import math

import numpy as np
import pytest
from scipy.stats import binom

from qquery.harness import (
    CSV_COLUMNS,
    REGISTRY,
    TrialStats,
    estimate_failure_bound,
    fit_json,
    fit_power_law,
    fit_scaling,
    run_trials,
    write_stats_csv,
)
from qquery.harness import baselines as ref
from qquery.harness import generators as gen
from qquery.stats import wilson_interval


def _stats(failures, trials):
    return TrialStats("bbht", trials, failures, failures / trials, wilson_interval(failures, trials),
                      0.0, 0.0, 0.0, 0.0)


def test_run_trials_argument_errors():
    with pytest.raises(ValueError):
        run_trials("bbht", 0, 1)
    with pytest.raises(KeyError):
        run_trials("nope", 10, 1)
    with pytest.raises(ValueError):
        run_trials("bbht", 10, 1, colour="red")


def test_run_trials_is_deterministic():
    a = run_trials("findsol", 300, 9, n=None, m=None)
    b = run_trials("findsol", 300, 9, n=None, m=None)
    assert a == b


def test_bbht_experiment_cost_bound():
    s = run_trials("bbht", 10_000, 3, n=64, m=4)
    assert s.cost_mean <= 1.9 * math.sqrt(16)


def test_trial_stats_invariants():
    s = run_trials("findall", 200, 2, n=None)
    assert 0 <= s.failures <= s.trials
    lo, hi = s.fail_ci95
    assert 0 <= lo <= s.fail_rate <= hi <= 1
    assert s.cost_p50 <= s.cost_p95


def test_different_seeds_agree_statistically():
    a = run_trials("bbht", 5000, 100, n=256, m=2)
    b = run_trials("bbht", 5000, 200, n=256, m=2)
    se = math.sqrt(a.cost_sd**2 / a.trials + b.cost_sd**2 / b.trials)
    assert abs(a.cost_mean - b.cost_mean) <= 3 * se


def test_synthetic_power_law_fit():
    fit = fit_scaling("synthetic_power", [4, 16, 64, 256, 1024], 1, 0, coef=7.0, exponent=0.5)
    assert fit.slope == pytest.approx(0.5, abs=1e-6)
    assert fit.r2 >= 0.999999
    assert fit.intercept == pytest.approx(math.log2(7), abs=1e-6)


def test_linear_scan_slope():
    fit = fit_scaling("linear_scan", [2**k for k in range(8, 15)], 2000, 5)
    assert fit.slope == pytest.approx(1.0, abs=0.05)


def test_findsol_slope():
    fit = fit_scaling("findsol", [2**k for k in range(8, 15)], 1500, 6, m=1)
    assert fit.slope == pytest.approx(0.5, abs=0.1)


def test_fit_needs_three_sizes():
    with pytest.raises(ValueError):
        fit_scaling("linear_scan", [16, 32], 10, 0)
    with pytest.raises(ValueError):
        fit_power_law([(1, 1), (2, 2)])


def test_callable_parameters_follow_size():
    fit = fit_scaling("findall", [64, 128, 256], 3, 0, m=lambda n: n // 4, storage="array")
    assert len(fit.points) == 3


@pytest.mark.parametrize(
    "failures, trials, bound, ok",
    [(0, 10_000, 0.4, True), (9000, 10_000, 0.4, False), (3900, 10_000, 0.4, True)],
)
def test_estimate_failure_bound(failures, trials, bound, ok):
    assert estimate_failure_bound(_stats(failures, trials), bound) is ok


def test_estimate_failure_bound_range():
    with pytest.raises(ValueError):
        estimate_failure_bound(_stats(0, 10), 1.5)


def test_wilson_coverage():
    rng = np.random.default_rng(0)
    p, n = 0.05, 200
    covered = 0
    meta = 10_000
    for k in rng.binomial(n, p, size=meta):
        lo, hi = wilson_interval(int(k), n)
        covered += lo <= p <= hi
    assert 0.93 <= covered / meta <= 0.97


def test_csv_and_fit_json():
    s = run_trials("bbht", 50, 1, n=64, m=4)
    buf = io.StringIO()
    write_stats_csv([s], buf)
    head, row = buf.getvalue().splitlines()
    assert head.split(",") == CSV_COLUMNS
    assert row.startswith("bbht,64,")
    fit = fit_power_law([(2, 2), (4, 4), (8, 8)])
    assert json.loads(fit_json(fit)) == {"slope": pytest.approx(1), "intercept": pytest.approx(0, abs=1e-12), "r2": 1.0}


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_every_experiment_runs_clean(name):
    s = run_trials(name, 20, 4)
    assert s.hard_violations == 0
    assert s.cost_mean >= 0


# --- generators and baselines


def test_random_digraph_has_exact_edge_count():
    g = gen.random_digraph(np.random.default_rng(0), 6, 30)
    assert g.E == 30  # complete
    assert all(u != v for u, v, _ in g.edges)


def test_potential_graphs_have_no_negative_cycle():
    for k in range(50):
        g = gen.potential_digraph(np.random.default_rng(k), 8, 20)
        assert ref.floyd_warshall(g) is not None


def test_distinct_points():
    pts = gen.distinct_points(np.random.default_rng(0), 40, 2, 30)
    assert len(np.unique(pts, axis=0)) == 40
    assert np.abs(pts).max() <= 30


def test_dfs_validator_rejects_bad_orders():
    from qquery.graphs import GraphOracle

    g = GraphOracle(3, [(0, 1), (0, 2), (1, 2)])
    parent = np.array([-1, 0, 1])
    assert ref.is_legal_dfs(g, 0, [0, 1, 2], parent)
    # 2 must be reached from 1 before backtracking to 0
    assert not ref.is_legal_dfs(g, 0, [0, 1, 2], np.array([-1, 0, 0]))
    assert not ref.is_legal_dfs(g, 0, [0, 1], parent)


def test_binomial_helper_sanity():
    # the 3-SE mismatch limit used in the suite allows one miss in 200 at 1e-3
    limit = 1e-3 + 3 * math.sqrt(1e-3 * (1 - 1e-3) / 200)
    assert 1 / 200 <= limit < 2 / 200
    assert binom.sf(1, 200, 1e-3) < 0.02
