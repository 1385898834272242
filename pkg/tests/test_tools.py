from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qquery.oracle import FALSE, Meter, Oracle, RngStream
from qquery.primitives import BbhtConfig
from qquery.tools import ArrayMarks, Fictitious, findall, findsol, maxfind, mindiff, minfind, threesum


def best_per_group(f, g, d):
    """Independent oracle: cheapest entry of each label, then the d cheapest labels."""
    best = {}
    for i, (fv, gv) in enumerate(zip(f, g)):
        if gv not in best or fv < f[best[gv]]:
            best[gv] = i
    ranked = sorted(best.items(), key=lambda kv: f[kv[1]])[:d]
    return {(f[i], gv) for gv, i in ranked}


# --- findsol


def test_findsol_without_solutions_pays_two_bbht_and_one_bcwz():
    meter = Meter()
    out = findsol(Oracle.from_array(np.zeros(64, dtype=bool)), 1000, RngStream(0), meter=meter)
    assert out.result is FALSE
    # each BBHT round k charges at most floor(1.31^k) queries
    bbht_cap = sum(max(1, math.floor(m)) for m in BbhtConfig().schedule(64))
    assert out.rounds == 2 * len(BbhtConfig().schedule(64)) + 1
    assert out.charged_cost <= 2 * bbht_cap + math.ceil(math.sqrt(64 * math.log2(1000)))


def test_findsol_always_true_finds_something():
    rng = RngStream(1)
    assert all(findsol(Oracle.from_array(np.ones(10, dtype=bool)), 100, rng).found for _ in range(500))


def test_findsol_unique_solution():
    o = Oracle.from_function(256, lambda x: x == 17)
    rng = RngStream(2)
    fails = 0
    trials = 100_000
    for _ in range(trials):
        out = findsol(o, 10**4, rng)
        if out.found:
            assert out.result == 17
        else:
            fails += 1
    bound = 0.5e-4
    assert fails / trials <= bound + 3 * math.sqrt(bound / trials)


def test_findsol_rejects_negative_r():
    with pytest.raises(ValueError):
        findsol(Oracle.from_array([True]), 10, RngStream(0), r=-1)


@given(st.lists(st.booleans(), min_size=1, max_size=200), st.integers(0, 10**6))
def test_findsol_returns_solutions_only(bits, seed):
    out = findsol(Oracle.from_array(bits), 100, RngStream(seed))
    assert (not out.found) or bits[out.result]


# --- minfind / maxfind


def test_minfind_abs_distance():
    o = Oracle.from_function(10, lambda x: abs(x - 5))
    assert minfind(o, 1000, RngStream(0)) == 5


def test_minfind_constant():
    o = Oracle.from_array([7] * 9)
    i = minfind(o, 1000, RngStream(0))
    assert o(i) == 7


def test_minfind_matches_scan_on_random_arrays():
    gen = np.random.default_rng(3)
    hits = 0
    for k in range(200):
        a = gen.integers(-100, 100, size=64)
        hits += a[minfind(Oracle.from_array(a), 1000, RngStream(3, k))] == a.min()
    assert hits / 200 >= 0.999 - 3 * math.sqrt(0.999 * 0.001 / 200)


def test_maxfind():
    assert maxfind(Oracle.from_array([3, 9, 2]), 100, RngStream(0)) == 1


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=100), st.integers(0, 10**6))
def test_minfind_trace_strictly_decreases(values, seed):
    trace = []
    i = minfind(Oracle.from_array(values), 100, RngStream(seed), trace=trace)
    assert all(a > b for a, b in zip(trace, trace[1:]))
    assert trace[-1] == values[i]


# --- findall


def test_findall_examples():
    rng = RngStream(0)
    assert sorted(findall(Oracle.from_function(8, lambda x: x % 2 == 0), 1000, rng)) == [0, 2, 4, 6]
    assert findall(Oracle.from_function(8, lambda x: False), 1000, rng) == []
    assert sorted(findall(Oracle.from_function(5, lambda x: True), 1000, rng)) == [0, 1, 2, 3, 4]


def test_findall_array_storage_is_wiped_for_reuse():
    marks = ArrayMarks(16)
    rng = RngStream(4)
    a = findall(Oracle.from_function(16, lambda x: x < 5), 1000, rng, storage=marks)
    assert not marks.marks.any()
    b = findall(Oracle.from_function(16, lambda x: x >= 12), 1000, rng, storage=marks)
    assert sorted(a) == [0, 1, 2, 3, 4] and sorted(b) == [12, 13, 14, 15]


def test_findall_rejects_unknown_storage():
    with pytest.raises(ValueError):
        findall(Oracle.from_array([True]), 10, RngStream(0), storage="tree")


@given(
    st.lists(st.booleans(), min_size=1, max_size=120),
    st.sampled_from(["hash", "array"]),
    st.integers(0, 10**6),
)
def test_findall_is_sound_and_duplicate_free(bits, storage, seed):
    got = findall(Oracle.from_array(bits), 100, RngStream(seed), storage=storage)
    assert len(set(got)) == len(got)
    assert all(bits[i] for i in got)


# --- mindiff

FLIGHTS_F = [5, 3, 7, 2, 9]
FLIGHTS_G = ["A", "A", "B", "C", "C"]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_mindiff_flights(d):
    res = mindiff(Oracle.from_array(FLIGHTS_F), Oracle.from_array(FLIGHTS_G), d, 1000, RngStream(d))
    assert {(e.f_value, e.g_value) for e in res} == best_per_group(FLIGHTS_F, FLIGHTS_G, d)


def test_mindiff_pads_with_fictitious_entries():
    res = mindiff(Oracle.from_array(FLIGHTS_F), Oracle.from_array(FLIGHTS_G), 5, 1000, RngStream(0))
    real = [e for e in res if not e.fictitious]
    fake = [e for e in res if e.fictitious]
    assert {(e.f_value, e.g_value) for e in real} == {(2, "C"), (3, "A"), (7, "B")}
    assert len(fake) == 2
    assert all(isinstance(e.g_value, Fictitious) and e.f_value == math.inf for e in fake)
    assert fake[0].g_value != fake[1].g_value


def test_mindiff_argument_checks():
    f = Oracle.from_array([1, 2])
    with pytest.raises(ValueError):
        mindiff(f, Oracle.from_array([1]), 1, 100, RngStream(0))
    with pytest.raises(ValueError):
        mindiff(f, Oracle.from_array([1, 2]), 0, 100, RngStream(0))


@given(st.data())
def test_mindiff_properties(data):
    n = data.draw(st.integers(1, 60))
    f = data.draw(st.lists(st.integers(0, 30), min_size=n, max_size=n))
    g = data.draw(st.lists(st.integers(0, 6), min_size=n, max_size=n))
    d = data.draw(st.integers(1, 8))
    log = []
    res = mindiff(Oracle.from_array(f), Oracle.from_array(g), d, 1000, RngStream(data.draw(st.integers(0, 99))),
                  pass_log=log)
    real = [e for e in res if not e.fictitious]
    assert len(res) == d
    assert len({e.g_value for e in real}) == len(real)
    assert all(f[e.index] == e.f_value and g[e.index] == e.g_value for e in real)
    assert len(res) - len(real) == max(0, d - len(set(g)))
    assert log and isinstance(log[0], bool)
    # values must equal the reference multiset (failure has probability <= 1e-3)
    want = sorted(fv for fv, _ in best_per_group(f, g, d))
    assert sorted(e.f_value for e in real) == want


# --- 3SUM


def test_threesum_examples():
    assert threesum([-5, 2, 3], 1000, RngStream(0)) is True
    assert threesum([1, 2, 3], 1000, RngStream(0)) is False


def test_threesum_needs_distinct_positions():
    # 0 + 0 + 0 needs three zeros; two are not enough
    assert threesum([0, 0, 5], 1000, RngStream(0)) is False
    assert threesum([0, 0, 0], 1000, RngStream(0)) is True
    # -4 = -(2 + 2) needs 2 twice
    assert threesum([2, -4, 7], 1000, RngStream(0)) is False


def test_threesum_matches_triple_loop():
    gen = np.random.default_rng(8)
    agree = 0
    for k in range(500):
        s = gen.integers(-50, 51, size=30).tolist()
        brute = any(s[a] + s[b] + s[c] == 0 for a in range(30) for b in range(a + 1, 30) for c in range(b + 1, 30))
        agree += threesum(s, 1000, RngStream(8, k)) == brute
    assert agree / 500 >= 0.999 - 3 * math.sqrt(0.999 * 0.001 / 500)
