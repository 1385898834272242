"""Domains, oracles, query metering and seeded random streams.

Every search in the package works against an :class:`Oracle`: a function over
the index set ``0..N-1``.  Oracles are evaluated *vectorized* over the whole
domain so the simulator can compute the number of solutions cheaply; that
scan is a classical peek and is never charged.  Charged queries are only
added by the search primitives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

__all__ = [
    "FALSE",
    "Domain",
    "Oracle",
    "Meter",
    "RngStream",
    "EpsilonBudget",
    "count_solutions",
    "sample_solution",
]


class _FalseType:
    """Singleton returned by searches that found nothing."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "FALSE"

    def __reduce__(self):
        return (_FalseType, ())


FALSE = _FalseType()


@dataclass(frozen=True)
class Domain:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"domain size must be non-negative, got {self.size}")

    def indices(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)


class Oracle:
    """A (binary or valued) function over ``0..size-1``.

    Parameters
    ----------
    size : int
        Domain size N.
    evaluate : callable
        Vectorized evaluator: receives an ``int64`` index array and returns an
        array of the same length.  Binary oracles return booleans (or 0/1).
    query_weight : int
        Base-oracle queries consumed per evaluation, w(F).

    Oracles are treated as immutable: the full value table is computed at
    most once and cached.
    """

    def __init__(
        self,
        size: int,
        evaluate: Callable[[np.ndarray], np.ndarray],
        query_weight: int = 1,
    ):
        self.domain = Domain(int(size))
        if query_weight < 1:
            raise ValueError("query_weight must be a positive integer")
        self._evaluate = evaluate
        self.query_weight = int(query_weight)

    @property
    def size(self) -> int:
        return self.domain.size

    @classmethod
    def from_array(cls, values, query_weight: int = 1) -> "Oracle":
        """Oracle backed by an explicit value table."""
        table = np.asarray(values)
        oracle = cls(len(table), lambda idx: table[idx], query_weight)
        oracle.__dict__["table"] = table
        return oracle

    @classmethod
    def from_function(cls, size: int, fn: Callable[[int], object], query_weight: int = 1) -> "Oracle":
        """Wrap a scalar ``index -> value`` function."""

        def evaluate(idx: np.ndarray) -> np.ndarray:
            return np.array([fn(int(i)) for i in idx])

        return cls(size, evaluate, query_weight)

    @cached_property
    def table(self) -> np.ndarray:
        """All values of the oracle, in index order (a classical scan)."""
        if self.size == 0:
            return np.zeros(0)
        return np.asarray(self._evaluate(self.domain.indices()))

    def __call__(self, index: int):
        if not 0 <= index < self.size:
            raise IndexError(f"index {index} outside domain of size {self.size}")
        return self.table[index]

    def mask(self) -> np.ndarray:
        """Boolean solution mask of a binary oracle."""
        values = self.table
        if values.dtype != bool:
            if values.size and not np.isin(values, (0, 1)).all():
                raise ValueError("binary oracle returned a value outside {0, 1}")
            values = values.astype(bool)
        return values

    def __repr__(self) -> str:
        return f"Oracle(size={self.size}, query_weight={self.query_weight})"


@dataclass
class Meter:
    """Charged quantum queries versus uncharged simulator bookkeeping."""

    charged_queries: int = 0
    classical_peeks: int = 0
    grover_runs: int = 0

    def charge(self, amount: int) -> None:
        if amount < 0:
            raise ValueError("cannot charge a negative amount")
        self.charged_queries += amount

    def peek(self, amount: int) -> None:
        self.classical_peeks += amount

    def snapshot(self) -> dict:
        return {
            "charged_queries": self.charged_queries,
            "classical_peeks": self.classical_peeks,
            "grover_runs": self.grover_runs,
        }


class RngStream:
    """Reproducible random stream keyed by ``(seed, stream_id)``.

    Streams with different ids are derived through :class:`numpy.random.SeedSequence`
    spawn keys, so they are statistically independent.  Scalar draws go
    through :class:`random.Random`, which is much cheaper per call than a
    numpy generator; :meth:`numpy` hands out a generator for bulk draws.
    """

    def __init__(self, seed: int = 0, stream_id: int = 0, _path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._path = (self.stream_id, *_path)
        self._seq = np.random.SeedSequence(self.seed, spawn_key=self._path)
        self._py_gen: random.Random | None = None
        self._np: np.random.Generator | None = None

    @property
    def _py(self) -> random.Random:
        # built on first use: parent streams often only hand out children
        if self._py_gen is None:
            state = self._seq.generate_state(4, np.uint64)
            self._py_gen = random.Random(int.from_bytes(state.tobytes(), "little"))
        return self._py_gen

    def random(self) -> float:
        return self._py.random()

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self._py.randrange(n)

    def numpy(self) -> np.random.Generator:
        if self._np is None:
            self._np = np.random.default_rng(self._seq.spawn(1)[0])
        return self._np

    def child(self, key: int) -> "RngStream":
        """Independent sub-stream, e.g. one per concurrent sub-task."""
        return RngStream(self.seed, self.stream_id, (*self._path[1:], int(key)))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class EpsilonBudget:
    """Permitted failure probability, carried as its inverse ``eps_inv``."""

    eps_inv: float = field(default=1000.0)

    def __post_init__(self):
        if not self.eps_inv > 1:
            raise ValueError(f"eps_inv must exceed 1, got {self.eps_inv}")

    @property
    def eps(self) -> float:
        return 1.0 / self.eps_inv

    @property
    def lg(self) -> float:
        return float(np.log2(self.eps_inv))

    def scaled(self, factor: float) -> "EpsilonBudget":
        """Budget for one of ``factor`` sub-calls that must all succeed."""
        return EpsilonBudget(self.eps_inv * factor)


def _as_budget(budget) -> EpsilonBudget:
    if isinstance(budget, EpsilonBudget):
        return budget
    return EpsilonBudget(float(budget))


def count_solutions(oracle: Oracle, meter: Meter | None = None) -> int:
    """Exact number of solutions of a binary oracle, by full scan."""
    if meter is not None:
        meter.peek(oracle.size)
    return int(np.count_nonzero(oracle.mask()))


def sample_solution(oracle: Oracle, rng: RngStream, meter: Meter | None = None) -> int:
    """Uniformly random solution; raises ``ValueError`` if there is none."""
    if meter is not None:
        meter.peek(oracle.size)
    solutions = np.flatnonzero(oracle.mask())
    if solutions.size == 0:
        raise ValueError("oracle has no solutions to sample")
    return int(solutions[rng.below(solutions.size)])
