"""Graph algorithms driven by the search tools.

A :class:`GraphOracle` answers queries in two models:

* ``"matrix"``: ask whether edge ``(i, j)`` exists (and its weight); a
  neighbour search ranges over all ``V`` vertices.
* ``"edgelist"``: ask for the ``k``-th outgoing edge of ``i``; a neighbour
  search ranges over the ``|d_i|`` edges of ``i``.

Each algorithm threads its failure budget so that all of its inner searches
succeed together with probability ``>= 1 - eps``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .oracle import FALSE, EpsilonBudget, Meter, RngStream, _as_budget
from .tools import ArrayMarks, _findall, _findsol, _minfind

__all__ = [
    "GraphOracle",
    "GraphFormatError",
    "DistArray",
    "DfsResult",
    "Matching",
    "bfs",
    "dfs",
    "spnw",
    "sssp_nonneg",
    "apsp",
    "bipartite_matching",
    "parse_graph",
    "read_graph",
    "format_graph",
]

Model = Literal["matrix", "edgelist"]


class GraphFormatError(ValueError):
    pass


class GraphOracle:
    """Simple graph (no self-edges, no parallel edges) with both query views.

    Parameters
    ----------
    n_vertices : int
    edges : iterable of ``(u, v)`` or ``(u, v, w)``
    directed : bool
    left : int, optional
        For bipartite graphs: vertices ``0..left-1`` form the left side.
    """

    def __init__(
        self,
        n_vertices: int,
        edges: Iterable[tuple],
        directed: bool = True,
        left: int | None = None,
    ):
        self.V = int(n_vertices)
        if self.V < 0:
            raise ValueError("vertex count must be non-negative")
        self.directed = bool(directed)
        self.left = left
        self.edges: list[tuple[int, int, float]] = []
        weighted = False
        adj = np.zeros((self.V, self.V), dtype=bool)
        weight = np.full((self.V, self.V), math.inf)
        for e in edges:
            if len(e) == 3:
                u, v, w = int(e[0]), int(e[1]), float(e[2])
                weighted = True
            elif len(e) == 2:
                u, v, w = int(e[0]), int(e[1]), 1.0
            else:
                raise ValueError(f"bad edge {e!r}")
            if not (0 <= u < self.V and 0 <= v < self.V):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.V - 1}")
            if u == v:
                raise ValueError(f"self-edge at vertex {u}")
            pairs = [(u, v)] if self.directed else [(u, v), (v, u)]
            for a, b in pairs:
                if adj[a, b]:
                    raise ValueError(f"duplicate edge ({u}, {v})")
                adj[a, b] = True
                weight[a, b] = w
            self.edges.append((u, v, w))
        self.weighted = weighted
        self.adj = adj
        self.weight = weight
        self.out_targets = [np.flatnonzero(adj[i]) for i in range(self.V)]
        self.out_weights = [weight[i, t] for i, t in enumerate(self.out_targets)]
        self.out_degree = np.array([t.size for t in self.out_targets], dtype=np.int64)
        # incoming-edge array, built once by a classical pass
        self.in_sources = [np.flatnonzero(adj[:, i]) for i in range(self.V)]
        self.in_weights = [weight[s, i] for i, s in enumerate(self.in_sources)]
        if left is not None:
            self._check_bipartite()

    @property
    def E(self) -> int:
        return len(self.edges)

    def matrix_view(self, i: int, j: int) -> tuple[bool, float]:
        return bool(self.adj[i, j]), float(self.weight[i, j])

    def edgelist_view(self, i: int, k: int) -> tuple[int, float]:
        return int(self.out_targets[i][k]), float(self.out_weights[i][k])

    def neighbor_domain(self, i: int, model: Model) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(targets, exists, weights)`` for the search domain of vertex ``i``."""
        if model == "matrix":
            return np.arange(self.V), self.adj[i], self.weight[i]
        if model == "edgelist":
            t = self.out_targets[i]
            return t, np.ones(t.size, dtype=bool), self.out_weights[i]
        raise ValueError(f"unknown model {model!r}")

    def incoming_domain(self, i: int, model: Model) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if model == "matrix":
            return np.arange(self.V), self.adj[:, i], self.weight[:, i]
        if model == "edgelist":
            s = self.in_sources[i]
            return s, np.ones(s.size, dtype=bool), self.in_weights[i]
        raise ValueError(f"unknown model {model!r}")

    def reweighted(self, potential: np.ndarray) -> "GraphOracle":
        edges = [(u, v, w + potential[u] - potential[v]) for u, v, w in self.edges]
        if not self.directed:
            raise ValueError("reweighting needs a directed graph")
        return GraphOracle(self.V, edges, directed=True)

    def _check_bipartite(self) -> None:
        L = self.left
        if not 0 <= L <= self.V:
            raise ValueError(f"left side size {L} outside 0..{self.V}")
        for u, v, _ in self.edges:
            if (u < L) == (v < L):
                raise ValueError(f"edge ({u}, {v}) does not cross the partition at {L}")

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"GraphOracle(V={self.V}, E={self.E}, {kind})"


@dataclass
class DistArray:
    dist: np.ndarray
    prev: np.ndarray  # predecessor on a shortest path, -1 for source/unreachable

    def path_to(self, target: int) -> list[int]:
        path = [target]
        while self.prev[path[-1]] >= 0 and len(path) <= len(self.prev):
            path.append(int(self.prev[path[-1]]))
        return path[::-1]


@dataclass
class DfsResult:
    order: list[int]
    parent: np.ndarray


@dataclass
class Matching:
    pairs: dict[int, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.pairs)

    def is_valid(self, g: GraphOracle) -> bool:
        rights = list(self.pairs.values())
        if len(set(rights)) != len(rights):
            return False
        return all(g.adj[u, v] for u, v in self.pairs.items())


def _check_vertex(g: GraphOracle, v: int) -> None:
    if not 0 <= v < g.V:
        raise ValueError(f"vertex {v} outside 0..{g.V - 1}")


def bfs(
    g: GraphOracle,
    source: int,
    budget: EpsilonBudget | float,
    rng: RngStream,
    model: Model = "edgelist",
    meter: Meter | None = None,
) -> list[int]:
    """Breadth-first visiting order from ``source``.

    Unvisited neighbours of each dequeued vertex are collected with one
    findall (array storage, budget ``V * eps_inv``).
    """
    _check_vertex(g, source)
    inner = _as_budget(budget).scaled(g.V)
    capacity = g.V if model == "matrix" else max(1, int(g.out_degree.max(initial=0)))
    marks = ArrayMarks(capacity)
    visited = np.zeros(g.V, dtype=bool)
    visited[source] = True
    queue = deque([source])
    order = []
    while queue:
        i = queue.popleft()
        order.append(i)
        targets, exists, _ = g.neighbor_domain(i, model)
        if targets.size == 0:
            continue
        for k in _findall(exists & ~visited[targets], inner, rng, meter, marks):
            j = int(targets[k])
            visited[j] = True
            queue.append(j)
    return order


def dfs(
    g: GraphOracle,
    source: int,
    budget: EpsilonBudget | float,
    rng: RngStream,
    model: Model = "edgelist",
    meter: Meter | None = None,
) -> DfsResult:
    """Depth-first visiting order and parent map from ``source``."""
    _check_vertex(g, source)
    inner = _as_budget(budget).scaled(2 * g.V)
    visited = np.zeros(g.V, dtype=bool)
    parent = np.full(g.V, -1, dtype=np.int64)
    visited[source] = True
    order = [source]
    stack = [source]
    while stack:
        k = stack[-1]
        targets, exists, _ = g.neighbor_domain(k, model)
        if targets.size == 0:
            stack.pop()
            continue
        out = _findsol(exists & ~visited[targets], inner, rng, meter)
        if not out.found:
            stack.pop()
            continue
        i = int(targets[out.result])
        visited[i] = True
        parent[i] = k
        order.append(i)
        stack.append(i)
    return DfsResult(order, parent)


def _spnw(g: GraphOracle, source: int, inner: EpsilonBudget, rng, model, meter):
    dist = np.full(g.V, math.inf)
    dist[source] = 0.0
    prev = np.full(g.V, -1, dtype=np.int64)

    def relax_all() -> bool:
        changed = False
        for i in range(g.V):
            sources, exists, w = g.incoming_domain(i, model)
            if sources.size == 0:
                continue
            with np.errstate(invalid="ignore"):
                vals = np.where(exists, dist[sources] + w, math.inf)
            k = _minfind(vals, inner, rng, meter)
            if vals[k] < dist[i]:
                dist[i] = vals[k]
                prev[i] = sources[k]
                changed = True
        return changed

    for _ in range(g.V - 1):
        relax_all()
    if relax_all():
        return FALSE
    return DistArray(dist, prev)


def spnw(
    g: GraphOracle,
    source: int,
    budget: EpsilonBudget | float,
    rng: RngStream,
    model: Model = "edgelist",
    meter: Meter | None = None,
) -> DistArray:
    """Single-source shortest paths allowing negative weights.

    Bellman-Ford with each vertex's best incoming edge picked by minfind
    (budget ``V^2 * eps_inv``).  Returns ``FALSE`` if a negative cycle is
    reachable from ``source``.
    """
    _check_vertex(g, source)
    return _spnw(g, source, _as_budget(budget).scaled(g.V * g.V), rng, model, meter)


def _dijkstra(g: GraphOracle, source: int, inner: EpsilonBudget, rng, model, meter) -> DistArray:
    dist = np.full(g.V, math.inf)
    dist[source] = 0.0
    prev = np.full(g.V, -1, dtype=np.int64)
    settled = np.zeros(g.V, dtype=bool)
    srcs, tgts, exists, ws = [], [], [], []

    def settle(u: int) -> None:
        settled[u] = True
        targets, ex, w = g.neighbor_domain(u, model)
        srcs.append(np.full(targets.size, u))
        tgts.append(targets)
        exists.append(ex)
        ws.append(w)

    settle(source)
    for _ in range(g.V - 1):
        s = np.concatenate(srcs)
        if s.size == 0:
            break
        t = np.concatenate(tgts)
        vals = np.where(np.concatenate(exists) & ~settled[t], dist[s] + np.concatenate(ws), math.inf)
        k = _minfind(vals, inner, rng, meter)
        if not math.isfinite(vals[k]):
            break
        v = int(t[k])
        dist[v] = vals[k]
        prev[v] = s[k]
        settle(v)
    return DistArray(dist, prev)


def sssp_nonneg(
    g: GraphOracle,
    source: int,
    budget: EpsilonBudget | float,
    rng: RngStream,
    model: Model = "edgelist",
    meter: Meter | None = None,
) -> DistArray:
    """Dijkstra for nonnegative weights with minfind choosing each settle.

    The search domain is every (settled vertex, outgoing slot) pair; the
    value is ``dist[u] + w`` for edges into unsettled vertices, else +inf.
    Uses ``O(V sqrt(E lg(V eps_inv)))`` queries.
    """
    _check_vertex(g, source)
    if any(w < 0 for _, _, w in g.edges):
        raise ValueError("sssp_nonneg needs nonnegative edge weights")
    return _dijkstra(g, source, _as_budget(budget).scaled(g.V * g.V), rng, model, meter)


def apsp(
    g: GraphOracle,
    budget: EpsilonBudget | float,
    rng: RngStream,
    model: Model = "edgelist",
    meter: Meter | None = None,
):
    """All-pairs shortest distances (``V x V`` array) or ``FALSE``.

    Johnson's scheme: potentials from one negative-weight search rooted at
    a virtual source, then a nonnegative search from every vertex.
    """
    budget = _as_budget(budget)
    V = g.V
    if V == 0:
        return np.zeros((0, 0))
    directed = g if g.directed else GraphOracle(
        V, [e for u, v, w in g.edges for e in ((u, v, w), (v, u, w))], directed=True
    )
    per_call = budget.scaled(V + 1)
    augmented = GraphOracle(
        V + 1, directed.edges + [(V, v, 0.0) for v in range(V)], directed=True
    )
    potentials = _spnw(augmented, V, per_call.scaled((V + 1) ** 2), rng, model, meter)
    if potentials is FALSE:
        return FALSE
    h = potentials.dist[:V]
    rw = directed.reweighted(h)
    out = np.full((V, V), math.inf)
    inner = per_call.scaled(V * V)
    for s in range(V):
        d = _dijkstra(rw, s, inner, rng, model, meter).dist
        out[s] = d - h[s] + h
    return out


def bipartite_matching(
    g: GraphOracle,
    budget: EpsilonBudget | float,
    rng: RngStream,
    model: Model = "edgelist",
    meter: Meter | None = None,
) -> Matching:
    """Maximum matching by Hopcroft-Karp phases with quantum BFS and DFS.

    Each phase runs a layered BFS from the free left vertices (findall over
    neighbours) and then a DFS (findsol over neighbours) that extracts a
    maximal set of vertex-disjoint shortest augmenting paths.  Every BFS and
    DFS gets budget ``4 sqrt(V) * eps_inv``.
    """
    if g.left is None:
        raise ValueError("bipartite_matching needs a graph with a declared left side")
    V, L = g.V, g.left
    phase_budget = _as_budget(budget).scaled(4 * math.sqrt(max(V, 1)))
    findall_budget = phase_budget.scaled(V)
    findsol_budget = phase_budget.scaled(2 * V)
    match = np.full(V, -1, dtype=np.int64)  # partner of every vertex
    marks = ArrayMarks(V)

    while True:
        layer = np.full(V, -1, dtype=np.int64)
        seen_right = np.zeros(V, dtype=bool)
        free_left = [u for u in range(L) if match[u] < 0]
        for u in free_left:
            layer[u] = 0
        queue = deque(free_left)
        shortest = None
        while queue:
            u = queue.popleft()
            if shortest is not None and layer[u] >= shortest:
                continue
            targets, exists, _ = g.neighbor_domain(u, model)
            if targets.size == 0:
                continue
            mask = exists & ~seen_right[targets] & (targets >= L) & (targets != match[u])
            for k in _findall(mask, findall_budget, rng, meter, marks):
                v = int(targets[k])
                seen_right[v] = True
                w = match[v]
                if w < 0:
                    shortest = layer[u] if shortest is None else min(shortest, layer[u])
                elif layer[w] < 0:
                    layer[w] = layer[u] + 1
                    queue.append(w)
        if shortest is None:
            break

        used = np.zeros(V, dtype=bool)
        for root in free_left:
            path = _augmenting_path(
                g, root, shortest, layer, match, used, findsol_budget, rng, model, meter
            )
            for u, v in path:
                match[u] = v
                match[v] = u
    return Matching({u: int(match[u]) for u in range(L) if match[u] >= 0})


def _augmenting_path(g, root, shortest, layer, match, used, budget, rng, model, meter):
    """Depth-first search along the BFS layers; returns (left, right) pairs to match."""
    stack = [root]
    chosen: list[int] = []
    while stack:
        x = stack[-1]
        lvl = layer[x]
        targets, exists, _ = g.neighbor_domain(x, model)
        mask = exists & ~used[targets] & (targets >= g.left) & (targets != match[x])
        partner = match[targets]
        if lvl == shortest:
            mask &= partner < 0
        else:
            mask &= (partner >= 0) & (layer[np.maximum(partner, 0)] == lvl + 1)
        out = _findsol(mask, budget, rng, meter) if targets.size else None
        if out is None or not out.found:
            layer[x] = -1  # dead end for the rest of this phase
            stack.pop()
            if chosen:
                chosen.pop()
            continue
        v = int(targets[out.result])
        used[v] = True
        chosen.append(v)
        if match[v] < 0:
            return list(zip(stack, chosen))
        stack.append(int(match[v]))
    return []


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str) -> GraphOracle:
    """Parse ``V E directed|undirected weighted|unweighted`` + optional ``left L`` + edges."""
    lines = [(n, ln.split()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, parts) for n, parts in lines if parts and not parts[0].startswith("#")]
    if not lines:
        raise GraphFormatError("line 1: empty graph file")
    n, head = lines[0]
    if len(head) != 4 or head[2] not in ("directed", "undirected") or head[3] not in ("weighted", "unweighted"):
        raise GraphFormatError(f"line {n}: expected 'V E directed|undirected weighted|unweighted'")
    try:
        V, E = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError(f"line {n}: V and E must be integers") from None
    directed = head[2] == "directed"
    weighted = head[3] == "weighted"
    body = lines[1:]
    left = None
    if body and body[0][1][0] == "left":
        n, parts = body[0]
        if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
            raise GraphFormatError(f"line {n}: expected 'left L'")
        left = int(parts[1])
        body = body[1:]
    if len(body) != E:
        raise GraphFormatError(f"line {n}: header declares {E} edges, found {len(body)}")
    edges = []
    for n, parts in body:
        want = 3 if weighted else 2
        if len(parts) != want:
            raise GraphFormatError(f"line {n}: expected {want} fields, got {len(parts)}")
        try:
            u, v = int(parts[0]), int(parts[1])
            edges.append((u, v, float(parts[2])) if weighted else (u, v))
        except ValueError:
            raise GraphFormatError(f"line {n}: malformed edge {' '.join(parts)!r}") from None
    try:
        return GraphOracle(V, edges, directed=directed, left=left)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def read_graph(path) -> GraphOracle:
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(g: GraphOracle) -> str:
    kind = "directed" if g.directed else "undirected"
    weighted = "weighted" if g.weighted else "unweighted"
    out = [f"{g.V} {g.E} {kind} {weighted}"]
    if g.left is not None:
        out.append(f"left {g.left}")
    for u, v, w in g.edges:
        out.append(f"{u} {v} {w:g}" if g.weighted else f"{u} {v}")
    return "\n".join(out) + "\n"
