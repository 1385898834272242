from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qquery.dp import (
    Rect,
    SumTable,
    coinchange,
    decode_rect,
    encode_rect,
    parse_coins,
    parse_matrix,
    subarray_sum,
)
from qquery.harness import baselines as ref
from qquery.oracle import RngStream


@pytest.mark.parametrize(
    "coins, target, want",
    [([1, 5, 10, 25], 40, 3), ([1, 5, 10, 20, 25], 40, 2), ([2], 3, math.inf), ([7], 0, 0)],
)
def test_coinchange_examples(coins, target, want):
    assert coinchange(coins, target, 1000, RngStream(0)).count == want


def test_coinchange_reconstruction():
    res = coinchange([1, 5, 10, 20, 25], 40, 1000, RngStream(0))
    assert sorted(res.coins()) == [20, 20]
    with pytest.raises(ValueError):
        coinchange([2], 3, 1000, RngStream(0)).coins()


def test_coinchange_validation():
    with pytest.raises(ValueError):
        coinchange([], 3, 100, RngStream(0))
    with pytest.raises(ValueError):
        coinchange([0, 1], 3, 100, RngStream(0))
    with pytest.raises(ValueError):
        coinchange([1], -1, 100, RngStream(0))


@given(st.lists(st.integers(1, 30), min_size=1, max_size=8, unique=True), st.integers(0, 120), st.integers(0, 10**6))
def test_coinchange_matches_classical_dp(coins, target, seed):
    res = coinchange(coins, target, 1000, RngStream(seed))
    assert res.count == ref.min_coins(coins, target)
    if math.isfinite(res.count):
        used = res.coins()
        assert sum(used) == target and len(used) == res.count


@pytest.mark.parametrize(
    "a, rect, total",
    [
        ([[-1]], (0, 0, 0, 0), -1),
        ([[1, 2], [3, 4]], (0, 0, 1, 1), 10),
        ([[-2, 5], [3, -4]], (0, 1, 0, 1), 5),
    ],
)
def test_subarray_examples(a, rect, total):
    got, s = subarray_sum(a, 1000, RngStream(0))
    assert got.as_tuple() == rect and s == total


def test_subarray_needs_square_input():
    with pytest.raises(ValueError):
        subarray_sum([[1, 2, 3]], 100, RngStream(0))


@given(st.integers(1, 6), st.data())
def test_sum_table_rectangles(n, data):
    a = np.array(data.draw(st.lists(st.integers(-9, 9), min_size=n * n, max_size=n * n))).reshape(n, n)
    t = SumTable(a)
    assert t.table[-1, -1] == a.sum()
    y0, y1 = sorted(data.draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    x0, x1 = sorted(data.draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    assert t.rect_sum(y0, x0, y1, x1) == a[y0 : y1 + 1, x0 : x1 + 1].sum()


@given(st.integers(1, 9), st.data())
def test_rect_encoding_round_trip(n, data):
    r = Rect(*data.draw(st.tuples(*[st.integers(0, n - 1)] * 4)))
    code = encode_rect(r, n)
    assert 0 <= code < n**4
    assert tuple(int(x) for x in decode_rect(code, n)) == r.as_tuple()


@given(st.integers(1, 7), st.data())
def test_subarray_matches_brute_force(n, data):
    a = np.array(data.draw(st.lists(st.integers(-9, 9), min_size=n * n, max_size=n * n))).reshape(n, n)
    rect, total = subarray_sum(a, 1000, RngStream(data.draw(st.integers(0, 999))))
    assert total == ref.max_subarray(a)
    assert a[rect.miny : rect.maxy + 1, rect.minx : rect.maxx + 1].sum() == total


def test_parsers():
    assert parse_coins('{"coins": [1, 5], "target": 7}') == ([1, 5], 7)
    with pytest.raises(ValueError):
        parse_coins('{"coins": [1]}')
    assert parse_matrix("2\n1 2\n3 4\n").tolist() == [[1, 2], [3, 4]]
    with pytest.raises(ValueError, match="line 3"):
        parse_matrix("2\n1 2\n3\n")
