"""Dynamic programming with minfind choosing among subproblems."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .oracle import EpsilonBudget, Meter, RngStream, _as_budget
from .tools import _minfind

__all__ = [
    "CoinResult",
    "coinchange",
    "SumTable",
    "Rect",
    "encode_rect",
    "decode_rect",
    "subarray_sum",
    "parse_coins",
    "parse_matrix",
]


@dataclass
class CoinResult:
    count: float  # math.inf when the target cannot be made
    first_coin: list  # first_coin[d]: denomination used first for amount d, or None

    def coins(self, target: int | None = None) -> list[int]:
        """Reconstruct one optimal multiset of coins."""
        d = len(self.first_coin) - 1 if target is None else target
        out = []
        while d > 0:
            c = self.first_coin[d]
            if c is None:
                raise ValueError(f"amount {d} cannot be made")
            out.append(c)
            d -= c
        return out


def coinchange(
    denominations: Sequence[int],
    target: int,
    budget: EpsilonBudget | float,
    rng: RngStream,
    meter: Meter | None = None,
) -> CoinResult:
    """Fewest coins summing to ``target`` (``inf`` if impossible).

    Fills ``T[0..D]`` bottom-up; for each amount ``d`` a minfind over the
    coins (budget ``D * eps_inv``) picks the coin minimizing ``1 + T[d - v]``.
    """
    coins = np.asarray(denominations, dtype=np.int64)
    if coins.size == 0 or (coins < 1).any():
        raise ValueError("denominations must be positive integers")
    if target < 0:
        raise ValueError("target must be non-negative")
    inner = _as_budget(budget).scaled(max(target, 1))
    table = np.full(target + 1, math.inf)
    table[0] = 0
    first: list = [None] * (target + 1)
    for d in range(1, target + 1):
        rest = d - coins
        vals = np.where(rest >= 0, 1 + table[np.maximum(rest, 0)], math.inf)
        i = _minfind(vals, inner, rng, meter)
        if math.isfinite(vals[i]):
            table[d] = vals[i]
            first[d] = int(coins[i])
    count = table[target]
    return CoinResult(int(count) if math.isfinite(count) else math.inf, first)


class SumTable:
    """Prefix sums ``T[i][j]`` = sum of ``A[0..i][0..j]``; negative indices read 0."""

    def __init__(self, a):
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.size == 0:
            raise ValueError("need a non-empty 2-D array")
        self.a = a
        t = np.zeros((a.shape[0] + 1, a.shape[1] + 1))
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                t[i + 1, j + 1] = a[i, j] + t[i, j + 1] + t[i + 1, j] - t[i, j]
        self._padded = t

    @property
    def table(self) -> np.ndarray:
        return self._padded[1:, 1:]

    def at(self, i, j):
        return self._padded[np.asarray(i) + 1, np.asarray(j) + 1]

    def rect_sum(self, miny, minx, maxy, maxx):
        return (
            self.at(maxy, maxx)
            - self.at(maxy, np.asarray(minx) - 1)
            - self.at(np.asarray(miny) - 1, maxx)
            + self.at(np.asarray(miny) - 1, np.asarray(minx) - 1)
        )


@dataclass(frozen=True)
class Rect:
    miny: int
    minx: int
    maxy: int
    maxx: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.miny, self.minx, self.maxy, self.maxx)


def encode_rect(rect: Rect, n: int) -> int:
    return ((rect.miny * n + rect.minx) * n + rect.maxy) * n + rect.maxx


def decode_rect(index, n: int):
    index, maxx = np.divmod(index, n)
    index, maxy = np.divmod(index, n)
    miny, minx = np.divmod(index, n)
    return miny, minx, maxy, maxx


def subarray_sum(
    a,
    budget: EpsilonBudget | float,
    rng: RngStream,
    meter: Meter | None = None,
) -> tuple[Rect, float]:
    """Rectangle of an ``N x N`` array with the largest element sum.

    Searches all ``N^4`` encoded ``(miny, minx, maxy, maxx)`` limits; encodings
    with ``min > max`` are invalid and never chosen.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.size == 0 or a.shape[0] != a.shape[1]:
        raise ValueError("need a non-empty square matrix")
    n = a.shape[0]
    sums = SumTable(a)
    miny, minx, maxy, maxx = decode_rect(np.arange(n**4, dtype=np.int64), n)
    valid = (miny <= maxy) & (minx <= maxx)
    # minimize the negated sum; invalid encodings get +inf
    vals = np.where(valid, -sums.rect_sum(miny, minx, maxy, maxx), math.inf)
    best = _minfind(vals, _as_budget(budget), rng, meter)
    rect = Rect(*(int(x) for x in decode_rect(best, n)))
    return rect, float(sums.rect_sum(*rect.as_tuple()))


def parse_coins(text: str) -> tuple[list[int], int]:
    doc = json.loads(text)
    try:
        coins = [int(c) for c in doc["coins"]]
        target = int(doc["target"])
    except (KeyError, TypeError, ValueError):
        raise ValueError('coin input must look like {"coins": [...], "target": D}') from None
    return coins, target


def parse_matrix(text: str) -> np.ndarray:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise ValueError("line 1: empty matrix file")
    try:
        n = int(rows[0][0])
    except ValueError:
        raise ValueError("line 1: expected the matrix size N") from None
    if len(rows) - 1 != n:
        raise ValueError(f"header declares {n} rows, found {len(rows) - 1}")
    out = []
    for k, row in enumerate(rows[1:], 2):
        if len(row) != n:
            raise ValueError(f"line {k}: expected {n} numbers, got {len(row)}")
        try:
            out.append([float(x) for x in row])
        except ValueError:
            raise ValueError(f"line {k}: non-numeric entry") from None
    return np.array(out)
