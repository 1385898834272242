from __future__ import annotations

import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qquery.oracle import FALSE, EpsilonBudget, Meter, Oracle, RngStream
from qquery.primitives import (
    BBHT_ORIGINAL,
    BbhtConfig,
    bbht,
    bcwz,
    bcwz_cost,
    f_theta,
    f_theta_closed,
    grover_run,
    lambda_sweep,
    m0_bound,
    tan_fixed_points,
    write_sweep_csv,
)


def _mask(n, m):
    mask = np.zeros(n, dtype=bool)
    mask[:m] = True
    return Oracle.from_array(mask)


def exact_bbht(n, m, lam, j_rule="floor"):
    """Independent oracle: exact failure probability and expected cost of BBHT.

    Round k draws j uniformly from 0..b_k-1 and charges j+1; it succeeds with
    the average of sin^2((2j+1) theta) over those j.
    """
    theta = math.asin(math.sqrt(m / n))
    alive, cost = 1.0, 0.0
    bound = 1.0
    while bound <= 2 * math.sqrt(n):
        b = max(1, math.floor(bound) if j_rule == "floor" else math.ceil(bound))
        js = np.arange(b)
        p = float(np.mean(np.sin((2 * js + 1) * theta) ** 2)) if m else 0.0
        cost += alive * float(np.mean(js + 1))
        alive *= 1 - p
        bound *= lam
    return alive, cost


# --- Grover runs


def test_grover_exact_rotation():
    # theta = pi/6, sin^2(3 theta) = 1
    meter = Meter()
    for k in range(200):
        out = grover_run(_mask(4, 1), 1, RngStream(k), meter)
        assert out.success and out.outcome == 0 and out.charged_cost == 2
    assert meter.charged_queries == 400


def test_grover_all_solutions_and_none():
    assert grover_run(_mask(16, 16), 0, RngStream(1)).success
    assert grover_run(_mask(16, 16), 0, RngStream(1)).charged_cost == 1
    assert not any(grover_run(_mask(16, 0), j, RngStream(j)).success for j in range(10))


def test_grover_weight_multiplies_cost():
    o = Oracle.from_array(np.array([True, False, False, False]), query_weight=3)
    assert grover_run(o, 2, RngStream(0)).charged_cost == 9


def test_grover_rate_matches_model():
    n, m, j = 64, 3, 2
    p = math.sin((2 * j + 1) * math.asin(math.sqrt(m / n))) ** 2
    trials = 20_000
    rng = RngStream(11)
    wins = sum(grover_run(_mask(n, m), j, rng).success for _ in range(trials))
    assert abs(wins / trials - p) <= 4 * math.sqrt(p * (1 - p) / trials)


# --- BBHT


def test_bbht_no_solution_stops_after_eight_rounds():
    # bounds 1, 1.31, ..., 6.62 are <= 8 = 2 sqrt(16); 8.67 is not
    out = bbht(_mask(16, 0), RngStream(3))
    assert out.result is FALSE
    assert out.rounds == 8
    assert len(BbhtConfig().schedule(16)) == 8


def test_bbht_table5_point_m1():
    rng = RngStream(21)
    o = _mask(1024, 1)
    costs, fails = [], 0
    for _ in range(10_000):
        out = bbht(o, rng)
        costs.append(out.charged_cost)
        fails += not out.found
    assert fails / 10_000 <= 0.4
    assert np.mean(costs) <= 1.9 * math.sqrt(1024)


def test_bbht_all_solutions_cost():
    rng = RngStream(2)
    costs = [bbht(_mask(1024, 1024), rng).charged_cost for _ in range(10_000)]
    assert np.mean(costs) <= 2.3


@pytest.mark.parametrize("n, m", [(1024, 1), (1024, 16), (256, 129), (64, 4)])
def test_bbht_matches_exact_expectation(n, m):
    want_fail, want_cost = exact_bbht(n, m, 1.31)
    rng = RngStream(n + m)
    o = _mask(n, m)
    trials = 8000
    outs = [bbht(o, rng) for _ in range(trials)]
    costs = np.array([x.charged_cost for x in outs])
    assert abs(costs.mean() - want_cost) <= 4 * costs.std() / math.sqrt(trials)
    fail = np.mean([not x.found for x in outs])
    assert abs(fail - want_fail) <= 4 * math.sqrt(max(want_fail * (1 - want_fail), 1e-4) / trials)


def test_ceil_rule_costs_more_at_half_density():
    # the (256, 129) point separates the two j rules
    assert exact_bbht(256, 129, 1.31, "floor")[1] <= 2.3
    assert exact_bbht(256, 129, 1.31, "ceil")[1] > 2.3


def test_bbht_config_validation_and_warning():
    with pytest.raises(ValueError):
        BbhtConfig(lam=2.0)
    with pytest.raises(ValueError):
        BbhtConfig(j_rule="round")
    assert BBHT_ORIGINAL.lam == pytest.approx(8 / 7)
    assert not BbhtConfig(lam=1.99).proven
    with pytest.warns(UserWarning):
        bbht(_mask(16, 1), RngStream(0), BbhtConfig(lam=1.99))


@given(st.integers(1, 300), st.data())
def test_bbht_result_is_a_solution(n, data):
    m = data.draw(st.integers(0, n))
    seed = data.draw(st.integers(0, 10**6))
    mask = np.zeros(n, dtype=bool)
    mask[data.draw(st.permutations(range(n)))[:m]] = True
    out = bbht(Oracle.from_array(mask), RngStream(seed))
    if out.found:
        assert mask[out.result]
    else:
        assert out.rounds == len(BbhtConfig().schedule(n)) or m > 0


# --- BCWZ


def test_bcwz_no_solution_cost():
    meter = Meter()
    out = bcwz(_mask(100, 0), 1024, RngStream(0), meter)
    assert out.result is FALSE
    assert out.charged_cost == 32 == math.ceil(math.sqrt(100 * 10))
    assert meter.charged_queries == 32


def test_bcwz_failure_rate():
    o = _mask(100, 7)
    rng = RngStream(9)
    trials = 100_000
    fails = sum(not bcwz(o, 1024, rng).found for _ in range(trials))
    eps = 1 / 1024
    assert abs(fails / trials - eps) <= 3 * math.sqrt(eps * (1 - eps) / trials)


def test_bcwz_singleton():
    out = bcwz(_mask(1, 1), 2, RngStream(0))
    assert out.result == 0 and out.charged_cost == 1


@given(st.integers(1, 10**6), st.floats(1.01, 1e12))
def test_bcwz_cost_grows_with_size_and_budget(n, eps_inv):
    b = EpsilonBudget(eps_inv)
    assert bcwz_cost(n, b) <= bcwz_cost(2 * n, b)
    assert bcwz_cost(n, b) <= bcwz_cost(n, b.scaled(2))


# --- analysis


def test_f_theta_values():
    assert f_theta(math.pi / 4, 1) == pytest.approx(0.5)
    assert f_theta(math.pi / 6, 1) == pytest.approx(0.75)
    assert f_theta_closed(math.pi / 6, 1) == pytest.approx(0.75)
    assert f_theta(math.pi / 2, 3) == pytest.approx(0.0, abs=1e-15)


@given(st.floats(1e-3, math.pi / 2 - 1e-3), st.integers(1, 500))
def test_f_theta_closed_form_agrees(theta, m):
    assert abs(f_theta(theta, m) - f_theta_closed(theta, m)) <= 1e-9


def test_m0_bound():
    assert m0_bound(100, 1) == pytest.approx(6.9)
    assert m0_bound(4, 2) == pytest.approx(0.69 * math.sqrt(2))
    with pytest.raises(ValueError):
        m0_bound(100, 51)


def test_tan_fixed_points():
    roots = tan_fixed_points(2)
    assert [round(r, 2) for r in roots] == [4.49, 7.73]
    assert tan_fixed_points(1)[0] == pytest.approx(4.4934, abs=1e-4)
    assert all(abs(math.tan(x) - x) <= 1e-6 for x in tan_fixed_points(5))


def test_lambda_sweep_rows_and_csv():
    lams = [8 / 7, 1.31, 1.5]
    rows = lambda_sweep(256, 1, lams, 2000, RngStream(4))
    assert [r.lam for r in rows] == pytest.approx(lams)
    for r in rows:
        assert r.fail_ci95[0] <= 0.4
        assert r.trials == 2000
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "lambda,mean_cost,cost_ci95,fail_rate,fail_ci95,trials"
    assert lines[1].startswith("1.1429,")
