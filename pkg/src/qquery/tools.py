"""Search tools built on the primitives: findsol, minfind, findall, mindiff.

All tools take an :class:`~qquery.oracle.EpsilonBudget` (or a plain
``eps_inv`` number) and make their running time depend on it only through
``lg(eps_inv)``.  Internally they work on boolean masks / value arrays so a
dynamic predicate (a moving threshold, a growing exclusion set) can be
re-snapshotted cheaply at each primitive call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np
from sortedcontainers import SortedList

from .oracle import FALSE, EpsilonBudget, Meter, Oracle, RngStream, _as_budget
from .primitives import BbhtConfig, SearchOutcome, _bbht, _bcwz, _SearchSpace

__all__ = [
    "findsol",
    "minfind",
    "maxfind",
    "findall",
    "ArrayMarks",
    "Fictitious",
    "MindiffEntry",
    "mindiff",
    "threesum",
]

_DEFAULT_BBHT = BbhtConfig()


def _findsol(
    mask: np.ndarray,
    budget: EpsilonBudget,
    rng: RngStream,
    meter: Meter | None,
    r: int = 2,
    config: BbhtConfig = _DEFAULT_BBHT,
    weight: int = 1,
) -> SearchOutcome:
    space = _SearchSpace(mask, meter)
    cost = 0
    rounds = 0
    for _ in range(r):
        out = _bbht(space, rng, config, meter, weight)
        cost += out.charged_cost
        rounds += out.rounds
        if out.found:
            return SearchOutcome(out.result, cost, rounds)
    out = _bcwz(space, budget, rng, meter, weight)
    return SearchOutcome(out.result, cost + out.charged_cost, rounds + out.rounds)


def findsol(
    oracle: Oracle,
    budget: EpsilonBudget | float,
    rng: RngStream,
    r: int = 2,
    meter: Meter | None = None,
    config: BbhtConfig | None = None,
) -> SearchOutcome:
    """Find a solution of ``oracle`` or decide there is none.

    Up to ``r`` BBHT attempts, then one BCWZ with the given budget.  A
    returned index always satisfies the predicate; ``FALSE`` is wrong with
    probability at most ``.5**r * M**(-.93 r) / eps_inv``.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    return _findsol(
        oracle.mask(), _as_budget(budget), rng, meter, r, config or _DEFAULT_BBHT, oracle.query_weight
    )


def _minfind(
    values: np.ndarray,
    budget: EpsilonBudget,
    rng: RngStream,
    meter: Meter | None,
    weight: int = 1,
    trace: list | None = None,
) -> int:
    n = values.size
    if n == 0:
        raise ValueError("cannot minimize over an empty domain")
    y = rng.below(n)
    if meter is not None:
        meter.charge(weight)  # reading F(y) for the starting point
    while True:
        if trace is not None:
            trace.append(values[y])
        out = _findsol(values < values[y], budget, rng, meter, weight=weight)
        if not out.found:
            return y
        y = out.result


def minfind(
    oracle: Oracle,
    budget: EpsilonBudget | float,
    rng: RngStream,
    meter: Meter | None = None,
    trace: list | None = None,
) -> int:
    """Index of a minimum of a valued oracle (correct w.p. >= 1 - eps).

    If ``trace`` is given, the value of every visited ``y`` is appended to it;
    the sequence is strictly decreasing.
    """
    values = np.asarray(oracle.table, dtype=float)
    return _minfind(values, _as_budget(budget), rng, meter, oracle.query_weight, trace)


def maxfind(
    oracle: Oracle,
    budget: EpsilonBudget | float,
    rng: RngStream,
    meter: Meter | None = None,
) -> int:
    """Index of a maximum of a valued oracle."""
    values = -np.asarray(oracle.table, dtype=float)
    return _minfind(values, _as_budget(budget), rng, meter, oracle.query_weight)


class ArrayMarks:
    """Preallocated membership array, wiped through a queue of touched slots.

    Stands in for a hash table when findall runs many times: allocation is
    paid once for the largest domain, and each call only clears what it set.
    """

    def __init__(self, capacity: int):
        self.capacity = int(capacity)
        self.marks = np.zeros(self.capacity, dtype=bool)
        self._touched: list[int] = []

    def add(self, i: int) -> None:
        if not self.marks[i]:
            self.marks[i] = True
            self._touched.append(i)

    def __contains__(self, i: int) -> bool:
        return bool(self.marks[i])

    def view(self, n: int) -> np.ndarray:
        if n > self.capacity:
            raise ValueError(f"domain of size {n} exceeds preallocated capacity {self.capacity}")
        return self.marks[:n]

    def wipe(self) -> None:
        while self._touched:
            self.marks[self._touched.pop()] = False


def _findall(
    mask: np.ndarray,
    budget: EpsilonBudget,
    rng: RngStream,
    meter: Meter | None,
    marks: ArrayMarks | None = None,
    weight: int = 1,
) -> list[int]:
    n = mask.size
    if n == 0:
        raise ValueError("cannot search an empty domain")
    found: list[int] = []
    if marks is None:
        seen: set[int] = set()
        excluded = np.zeros(n, dtype=bool)
        while True:
            out = _findsol(mask & ~excluded, budget, rng, meter, weight=weight)
            if not out.found:
                return found
            # rebuild from the hash set: the set is the source of truth
            seen.add(out.result)
            excluded = np.zeros(n, dtype=bool)
            excluded[list(seen)] = True
            found.append(out.result)
    try:
        taken = marks.view(n)
        while True:
            out = _findsol(mask & ~taken, budget, rng, meter, weight=weight)
            if not out.found:
                return found
            marks.add(out.result)
            found.append(out.result)
    finally:
        marks.wipe()


def findall(
    oracle: Oracle,
    budget: EpsilonBudget | float,
    rng: RngStream,
    storage: str | ArrayMarks = "hash",
    meter: Meter | None = None,
) -> list[int]:
    """All solutions of ``oracle``, in the order they were found.

    ``storage`` is ``"hash"`` (a set of found indices) or an
    :class:`ArrayMarks` with capacity at least ``oracle.size``, which is wiped
    before returning.  Every returned index is a solution and there are no
    duplicates; completeness holds with probability >= 1 - eps.
    """
    if isinstance(storage, ArrayMarks):
        marks = storage
    elif storage == "hash":
        marks = None
    elif storage == "array":
        marks = ArrayMarks(oracle.size)
    else:
        raise ValueError(f"unknown storage {storage!r}")
    return _findall(oracle.mask(), _as_budget(budget), rng, meter, marks, oracle.query_weight)


# ---------------------------------------------------------------------------
# mindiff


@dataclass(frozen=True)
class Fictitious:
    """Placeholder element with value +inf and a group label of its own."""

    slot: int

    def __repr__(self) -> str:
        return f"Fictitious({self.slot})"


@dataclass(frozen=True)
class MindiffEntry:
    index: int | Fictitious
    f_value: float
    g_value: Hashable

    @property
    def fictitious(self) -> bool:
        return isinstance(self.index, Fictitious)


def _factorize(labels) -> tuple[np.ndarray, list]:
    codes: dict = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, g in enumerate(labels):
        out[i] = codes.setdefault(g.item() if hasattr(g, "item") else g, len(codes))
    return out, list(codes)


def mindiff(
    f_oracle: Oracle,
    g_oracle: Oracle,
    d: int,
    budget: EpsilonBudget | float,
    rng: RngStream,
    c1: float = 9.0,
    c2: float = 6.0,
    meter: Meter | None = None,
    pass_log: list | None = None,
) -> list[MindiffEntry]:
    """The ``d`` smallest-``F`` elements with pairwise distinct ``G`` labels.

    Think of ``F`` as a flight price and ``G`` as its destination: the result
    holds the cheapest flight to each of the ``d`` cheapest destinations.  If
    there are only ``gamma < d`` destinations, ``d - gamma`` entries are
    :class:`Fictitious`.

    Each pass runs BBHT for improving elements until ``c1 * sqrt(N d)`` queries
    or ``c2 * d * lg N`` iterations are spent, then a findsol checks whether
    anything can still improve the answer; if so, another pass follows.
    ``pass_log`` receives one boolean per pass: whether the pass alone left
    nothing to improve.
    """
    budget = _as_budget(budget)
    n = f_oracle.size
    if n == 0:
        raise ValueError("cannot search an empty domain")
    if g_oracle.size != n:
        raise ValueError("F and G must share a domain")
    if d < 1:
        raise ValueError("d must be at least 1")
    fvals = np.asarray(f_oracle.table, dtype=float)
    gid, labels = _factorize(g_oracle.table)
    if meter is not None:
        meter.peek(2 * n)
    n_groups = len(labels)
    weight = max(f_oracle.query_weight, g_oracle.query_weight)

    # x[i] = (index, f) with index < 0 marking a fictitious slot
    x_index = [-(i + 1) for i in range(d)]
    x_f = [math.inf] * d
    x_group = [-(i + 1) for i in range(d)]
    in_h = np.zeros(n_groups, dtype=bool)
    best = np.full(n_groups, math.inf)
    slot_of: dict[int, int] = {}
    tree = SortedList((math.inf, i) for i in range(d))

    def improving_mask() -> np.ndarray:
        tau = tree[-1][0]
        return np.where(in_h[gid], fvals < best[gid], fvals < tau)

    def place(slot: int, y: int) -> None:
        old = x_group[slot]
        if old >= 0:
            in_h[old] = False
            best[old] = math.inf
            del slot_of[old]
        tree.remove((x_f[slot], slot))
        g = int(gid[y])
        x_index[slot], x_f[slot], x_group[slot] = y, float(fvals[y]), g
        in_h[g] = True
        best[g] = fvals[y]
        slot_of[g] = slot
        tree.add((x_f[slot], slot))

    cost_cap = c1 * math.sqrt(n * d)
    iter_cap = c2 * d * max(1.0, math.log2(n))
    while True:
        spent = 0
        iters = 0
        while spent < cost_cap and iters < iter_cap:
            out = _bbht(_SearchSpace(improving_mask(), meter), rng, _DEFAULT_BBHT, meter, weight)
            spent += out.charged_cost
            iters += 1
            if out.found:
                y = out.result
                g = int(gid[y])
                place(slot_of[g] if in_h[g] else tree[-1][1], y)
        mask = improving_mask()
        if pass_log is not None:
            pass_log.append(not mask.any())
        if not _findsol(mask, budget, rng, meter, weight=weight).found:
            break

    entries = []
    for slot in range(d):
        if x_index[slot] < 0:
            tag = Fictitious(slot)
            entries.append(MindiffEntry(tag, math.inf, tag))
        else:
            entries.append(MindiffEntry(x_index[slot], x_f[slot], labels[x_group[slot]]))
    return entries


# ---------------------------------------------------------------------------
# 3SUM


def threesum(
    values: Sequence[int],
    budget: EpsilonBudget | float,
    rng: RngStream,
    meter: Meter | None = None,
) -> bool:
    """Whether three entries at distinct positions sum to zero.

    Searches the ``N^2`` index pairs ``(i, j)``, ``i < j``, for one whose
    negated sum occurs at a third position.
    """
    s = np.asarray(values, dtype=np.int64)
    n = s.size
    if n == 0:
        raise ValueError("need at least one value")
    uniq, counts = np.unique(s, return_counts=True)

    def evaluate(idx: np.ndarray) -> np.ndarray:
        i, j = np.divmod(idx, n)
        target = -(s[i] + s[j])
        pos = np.minimum(np.searchsorted(uniq, target), uniq.size - 1)
        available = np.where(uniq[pos] == target, counts[pos], 0)
        available = available - (s[i] == target) - (s[j] == target)
        return (i < j) & (available >= 1)

    pairs = Oracle(n * n, evaluate)
    return findsol(pairs, budget, rng, meter=meter).found
