"""Maximum number of points on a line, in Z^n and in R^2.

Both versions score every point ``p`` by how many other points share a
line with it, then pick the best ``p`` with a quantum maximum search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

import numpy as np

from .oracle import EpsilonBudget, Meter, RngStream, _as_budget
from .tools import _minfind

__all__ = [
    "Line",
    "canonicalize",
    "mup",
    "mup_direction",
    "maxpoints_zn",
    "mup2",
    "maxpoints_r2",
    "parse_points",
    "read_points",
]


@dataclass(frozen=True)
class Line:
    """The line ``base + t * direction`` and the number of input points on it."""

    base: tuple
    direction: tuple
    count: int

    def contains(self, point) -> bool:
        diff = [Fraction(a) - Fraction(b) for a, b in zip(point, self.base)]
        d = [Fraction(x) for x in self.direction]
        # diff parallel to d: all 2x2 minors vanish
        return all(
            diff[i] * d[j] == diff[j] * d[i]
            for i in range(len(d))
            for j in range(i + 1, len(d))
        )


def canonicalize(v: Sequence[int]) -> tuple[int, ...]:
    """Primitive integer direction: gcd 1, first nonzero component positive."""
    v = [int(x) for x in v]
    g = math.gcd(*v)
    if g == 0:
        raise ValueError("cannot canonicalize the zero vector")
    first = next(x for x in v if x != 0)
    if first < 0:
        g = -g
    return tuple(x // g for x in v)


def _canonical_rows(diffs: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(np.abs(diffs), axis=1)
    out = diffs // g[:, None]
    first = out[np.arange(len(out)), np.argmax(out != 0, axis=1)]
    return out * np.where(first < 0, -1, 1)[:, None]


def _direction_counts(points: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    diffs = np.delete(points, p, axis=0) - points[p]
    dirs, counts = np.unique(_canonical_rows(diffs), axis=0, return_counts=True)
    return dirs, counts


def mup(p: int, points) -> int:
    """Most *other* points on one line through ``points[p]``."""
    pts = _as_int_points(points)
    if len(pts) < 2:
        return 0
    return int(_direction_counts(pts, p)[1].max())


def mup_direction(p: int, points) -> tuple[tuple[int, ...], int]:
    pts = _as_int_points(points)
    dirs, counts = _direction_counts(pts, p)
    best = int(np.argmax(counts))
    return tuple(int(x) for x in dirs[best]), int(counts[best])


def _as_int_points(points) -> np.ndarray:
    pts = np.asarray(points)
    if pts.ndim != 2:
        raise ValueError("points must be an N x n array")
    if not np.issubdtype(pts.dtype, np.integer):
        if not np.all(pts == np.round(pts)):
            raise ValueError("Z^n points must have integer coordinates")
        pts = pts.astype(np.int64)
    if len(np.unique(pts, axis=0)) != len(pts):
        raise ValueError("points must be pairwise distinct")
    return pts.astype(np.int64)


def maxpoints_zn(
    points,
    budget: EpsilonBudget | float,
    rng: RngStream,
    meter: Meter | None = None,
) -> Line:
    """Line through the most points of an integer point set (any dimension)."""
    pts = _as_int_points(points)
    n = len(pts)
    if n < 2:
        raise ValueError("need at least two points")
    scores = np.array([mup(i, pts) for i in range(n)], dtype=float)
    best = _minfind(-scores, _as_budget(budget), rng, meter)
    direction, count = mup_direction(best, pts)
    return Line(tuple(int(x) for x in pts[best]), direction, count + 1)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _half_plane_vectors(points, p: int, exact: bool) -> list:
    base = points[p]
    vecs = []
    for i, q in enumerate(points):
        if i == p:
            continue
        x, y = q[0] - base[0], q[1] - base[1]
        if x < 0 or (x == 0 and y < 0):
            x, y = -x, -y
        if not exact:
            r = math.hypot(x, y)
            x, y = x / r, y / r
        vecs.append((x, y, i))
    return vecs


def _runs(vecs, delta: float) -> tuple[int, int]:
    """Longest circular run of consecutive near-parallel vectors; (length, a member)."""
    m = len(vecs)
    if m == 1:
        return 1, vecs[0][2]
    close = [abs(_cross(vecs[k], vecs[(k + 1) % m])) <= delta for k in range(m)]
    if all(close):
        return m, vecs[0][2]
    # start right after a break so the second pass wraps around
    start = close.index(False) + 1
    best, best_member, run = 0, vecs[0][2], 1
    for step in range(m):
        k = (start + step) % m
        if step and close[(k - 1) % m]:
            run += 1
        else:
            run = 1
        if run > best:
            best, best_member = run, vecs[k][2]
    return best, best_member


def mup2(p: int, points, delta: float = 1e-9, exact: bool | None = None) -> tuple[int, int]:
    """Angular-sort score of ``points[p]``: (other points on best line, one of them).

    In exact mode (integer or rational inputs) cross products are computed
    without rounding and ``delta`` should be 0; otherwise the vectors are
    normalized to unit length and compared with tolerance ``delta``.
    """
    pts = list(points)
    if exact is None:
        exact = _all_exact(pts)
    vecs = _half_plane_vectors(pts, p, exact)
    # counter-clockwise order; ties (parallel vectors) stay adjacent
    vecs.sort(key=cmp_to_key(lambda a, b: -1 if _cross(a, b) > 0 else (1 if _cross(a, b) < 0 else 0)))
    return _runs(vecs, delta)


def _all_exact(pts) -> bool:
    return all(isinstance(c, (int, np.integer, Fraction)) for q in pts for c in q)


def maxpoints_r2(
    points,
    budget: EpsilonBudget | float,
    rng: RngStream,
    delta: float = 1e-9,
    exact: bool | None = None,
    meter: Meter | None = None,
) -> Line:
    """Line through the most points of a planar point set, via angular sorting."""
    pts = [tuple(int(c) if isinstance(c, np.integer) else c for c in q) for q in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    if any(len(q) != 2 for q in pts):
        raise ValueError("maxpoints_r2 takes points in the plane")
    if len(set(pts)) != len(pts):
        raise ValueError("points must be pairwise distinct")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if exact is None:
        exact = _all_exact(pts)
    scored = [mup2(i, pts, delta, exact) for i in range(len(pts))]
    scores = np.array([s for s, _ in scored], dtype=float)
    best = _minfind(-scores, _as_budget(budget), rng, meter)
    count, other = scored[best]
    base, far = pts[best], pts[other]
    return Line(base, (far[0] - base[0], far[1] - base[1]), count + 1)


def parse_points(text: str, integer: bool = True) -> np.ndarray | list:
    """Points file: ``n N`` then N rows of n numbers."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ValueError("line 1: empty points file")
    try:
        n, count = int(rows[0][0]), int(rows[0][1])
    except (ValueError, IndexError):
        raise ValueError("line 1: expected 'n N'") from None
    if len(rows) - 1 != count:
        raise ValueError(f"header declares {count} points, found {len(rows) - 1}")
    out = []
    for k, row in enumerate(rows[1:], 2):
        if len(row) != n:
            raise ValueError(f"line {k}: expected {n} coordinates, got {len(row)}")
        try:
            out.append([int(x) for x in row] if integer else [float(x) for x in row])
        except ValueError:
            raise ValueError(f"line {k}: non-numeric coordinate") from None
    return np.array(out, dtype=np.int64) if integer else out


def read_points(path, integer: bool = True):
    with open(path) as fh:
        return parse_points(fh.read(), integer)
