"""Classical reference answers.

These share no code with the quantum-search path: graph answers come from
networkx, the rest are direct brute force.
"""

from __future__ import annotations

import itertools
import math

import networkx as nx
import numpy as np

from ..graphs import GraphOracle


def _nx_graph(g: GraphOracle) -> nx.Graph:
    G = nx.DiGraph() if g.directed else nx.Graph()
    G.add_nodes_from(range(g.V))
    G.add_weighted_edges_from(g.edges)
    return G


def reachable_set(g: GraphOracle, source: int) -> set[int]:
    G = _nx_graph(g)
    return {source} | (nx.descendants(G, source) if g.directed else nx.node_connected_component(G, source))


def hop_distances(g: GraphOracle, source: int) -> dict[int, int]:
    return dict(nx.single_source_shortest_path_length(_nx_graph(g), source))


def bellman_ford(g: GraphOracle, source: int):
    """Distance array with inf for unreachable, or None on a reachable negative cycle."""
    try:
        d = nx.single_source_bellman_ford_path_length(_nx_graph(g), source)
    except nx.NetworkXUnbounded:
        return None
    out = np.full(g.V, math.inf)
    for v, dv in d.items():
        out[v] = dv
    return out


def dijkstra(g: GraphOracle, source: int) -> np.ndarray:
    d = nx.single_source_dijkstra_path_length(_nx_graph(g), source)
    out = np.full(g.V, math.inf)
    for v, dv in d.items():
        out[v] = dv
    return out


def floyd_warshall(g: GraphOracle):
    """All-pairs distances, or None if any negative cycle exists."""
    d = nx.floyd_warshall_numpy(_nx_graph(g), nodelist=range(g.V))
    if (np.diag(d) < 0).any():
        return None
    return d


def max_matching_size(g: GraphOracle) -> int:
    G = _nx_graph(g)
    m = nx.bipartite.hopcroft_karp_matching(G, top_nodes=range(g.left))
    return len(m) // 2


def is_legal_dfs(g: GraphOracle, source: int, order: list[int], parent) -> bool:
    """Replay a DFS order against the adjacency structure.

    Every new vertex must be an unvisited neighbour of the deepest vertex on
    the stack that still has unvisited neighbours, and the search must end
    only when no stacked vertex has any.
    """
    if not order or order[0] != source or len(set(order)) != len(order):
        return False
    visited = {source}
    stack = [source]

    def open_neighbors(u):
        return [v for v in range(g.V) if g.adj[u, v] and v not in visited]

    for v in order[1:]:
        while stack and not open_neighbors(stack[-1]):
            stack.pop()
        if not stack:
            return False
        top = stack[-1]
        if not g.adj[top, v] or v in visited or parent[v] != top:
            return False
        visited.add(v)
        stack.append(v)
    return all(not open_neighbors(u) for u in stack)


def max_collinear(points) -> int:
    """Most input points on one line, by checking every pair against every point."""
    pts = np.asarray(points, dtype=np.int64)
    n = len(pts)
    if n <= 2:
        return n
    best = 2
    for i in range(n):
        for j in range(i + 1, n):
            d = pts[j] - pts[i]
            rel = pts - pts[i]
            if pts.shape[1] == 2:
                on = rel[:, 0] * d[1] - rel[:, 1] * d[0] == 0
            else:
                # all 2x2 minors of [rel; d] vanish
                on = np.ones(n, dtype=bool)
                for a, b in itertools.combinations(range(pts.shape[1]), 2):
                    on &= rel[:, a] * d[b] - rel[:, b] * d[a] == 0
            best = max(best, int(on.sum()))
    return best


def min_coins(denominations, target: int):
    best = [0] + [math.inf] * target
    for d in range(1, target + 1):
        for c in denominations:
            if c <= d and best[d - c] + 1 < best[d]:
                best[d] = best[d - c] + 1
    return best[target]


def max_subarray(a) -> float:
    a = np.asarray(a, dtype=float)
    n, m = a.shape
    best = -math.inf
    for y0 in range(n):
        for y1 in range(y0, n):
            for x0 in range(m):
                for x1 in range(x0, m):
                    best = max(best, float(a[y0 : y1 + 1, x0 : x1 + 1].sum()))
    return best


def has_zero_triple(values) -> bool:
    return any(a + b + c == 0 for a, b, c in itertools.combinations(list(values), 3))


def linear_scan(mask) -> tuple[int, int]:
    """(first solution or -1, number of probes) for an unstructured scan."""
    for i, hit in enumerate(mask):
        if hit:
            return i, i + 1
    return -1, len(mask)
