"""Random instance generators (all draws from a numpy Generator)."""

from __future__ import annotations

import numpy as np

from ..graphs import GraphOracle


def marked_mask(gen: np.random.Generator, n: int, m: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[gen.choice(n, size=m, replace=False)] = True
    return mask


def random_digraph(
    gen: np.random.Generator,
    v: int,
    e: int,
    weights: tuple[int, int] | None = None,
) -> GraphOracle:
    """Directed simple graph with exactly ``e`` distinct non-loop edges."""
    e = min(e, v * (v - 1))
    slots = gen.choice(v * (v - 1), size=e, replace=False)
    u, k = np.divmod(slots, v - 1)
    t = k + (k >= u)  # skip the diagonal
    if weights is None:
        edges = list(zip(u.tolist(), t.tolist()))
    else:
        w = gen.integers(weights[0], weights[1] + 1, size=e)
        edges = list(zip(u.tolist(), t.tolist(), w.tolist()))
    return GraphOracle(v, edges, directed=True)


def potential_digraph(gen: np.random.Generator, v: int, e: int, spread: int = 5) -> GraphOracle:
    """Negative edges but no negative cycle: ``w = base + p[u] - p[v]`` with ``base >= 0``."""
    g = random_digraph(gen, v, e, weights=(0, 8))
    p = gen.integers(-spread, spread + 1, size=v)
    return GraphOracle(v, [(a, b, int(w) + int(p[a]) - int(p[b])) for a, b, w in g.edges], directed=True)


def random_bipartite(gen: np.random.Generator, left: int, right: int, p: float) -> GraphOracle:
    hit = gen.random((left, right)) < p
    edges = [(i, left + j) for i, j in zip(*np.nonzero(hit))]
    return GraphOracle(left + right, edges, directed=False, left=left)


def distinct_points(gen: np.random.Generator, n: int, dim: int, bound: int) -> np.ndarray:
    """``n`` distinct integer points in ``[-bound, bound]^dim``, some forced collinear."""
    pts: set[tuple] = set()
    # plant a line so the maximum is often above 2
    base = gen.integers(-bound // 2, bound // 2 + 1, size=dim)
    step = gen.integers(-3, 4, size=dim)
    if not step.any():
        step[0] = 1
    for k in range(int(gen.integers(2, max(3, n // 4) + 1))):
        q = base + k * step
        if np.abs(q).max() <= bound:
            pts.add(tuple(int(x) for x in q))
    while len(pts) < n:
        pts.add(tuple(int(x) for x in gen.integers(-bound, bound + 1, size=dim)))
    out = np.array(sorted(pts)[:n] if len(pts) > n else sorted(pts), dtype=np.int64)
    return out[gen.permutation(len(out))]
