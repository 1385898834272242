"""Named experiments: instance generator + algorithm + pass/fail judgement.

A trial receives its own :class:`RngStream`; instance data is drawn from
``rng.child(0)`` and the algorithm's coin flips from ``rng.child(1)``, so the
two never interfere.  Each trial returns a :class:`TrialOutcome`:

``failed``
    the algorithm's answer disagrees with the classical reference (or it
    returned FALSE when a solution exists). Allowed with probability eps.
``hard_ok``
    soundness invariants that must hold in every trial, whatever the coins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import dp, geometry, graphs, primitives, tools
from ..oracle import FALSE, Meter, Oracle, RngStream
from . import baselines as ref
from . import generators as gen


@dataclass
class TrialOutcome:
    failed: bool
    cost: float
    hard_ok: bool = True
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Experiment:
    name: str
    trial: Callable[[RngStream, dict], TrialOutcome]
    defaults: dict
    size_param: str = "n"
    describe: str = ""


REGISTRY: dict[str, Experiment] = {}


def register(name: str, size_param: str = "n", **defaults):
    def wrap(fn):
        REGISTRY[name] = Experiment(name, fn, defaults, size_param, (fn.__doc__ or "").strip())
        return fn

    return wrap


def _streams(rng: RngStream) -> tuple[np.random.Generator, RngStream, Meter]:
    return rng.child(0).numpy(), rng.child(1), Meter()


# ---------------------------------------------------------------------------
# primitives


@register("bbht", n=1024, m=1, lam=1.31, j_rule="floor")
def _bbht_trial(rng, p):
    """BBHT on a random mask with M solutions; failure = FALSE while M > 0."""
    g, coins, meter = _streams(rng)
    mask = gen.marked_mask(g, p["n"], p["m"])
    cfg = primitives.BbhtConfig(lam=p["lam"], j_rule=p["j_rule"])
    out = primitives._bbht(primitives._SearchSpace(mask, None), coins, cfg, meter)
    hard = not out.found or bool(mask[out.result])
    return TrialOutcome(p["m"] > 0 and not out.found, out.charged_cost, hard)


@register("grover", n=4, m=1, j=1)
def _grover_trial(rng, p):
    """One Grover run with j iterations; failure = the measured index is no solution."""
    g, coins, meter = _streams(rng)
    mask = gen.marked_mask(g, p["n"], p["m"])
    out = primitives.grover_run(Oracle.from_array(mask), p["j"], coins, meter)
    return TrialOutcome(not out.success, out.charged_cost, bool(mask[out.outcome]) == out.success)


@register("bcwz", n=1024, m=1, eps_inv=1000.0)
def _bcwz_trial(rng, p):
    """BCWZ search; failure = FALSE while M > 0."""
    g, coins, meter = _streams(rng)
    mask = gen.marked_mask(g, p["n"], p["m"])
    out = primitives.bcwz(Oracle.from_array(mask), p["eps_inv"], coins, meter)
    hard = not out.found or bool(mask[out.result])
    return TrialOutcome(p["m"] > 0 and not out.found, out.charged_cost, hard)


# ---------------------------------------------------------------------------
# tools


def _size_m(g: np.random.Generator, p: dict) -> tuple[int, int]:
    n = p["n"] if p["n"] is not None else int(g.integers(1, p["n_max"] + 1))
    m = p["m"] if p["m"] is not None else int(g.integers(0, min(n, 8) + 1))
    return n, m


@register("findsol", n=1024, m=1, n_max=1024, eps_inv=1000.0)
def _findsol_trial(rng, p):
    """findsol; failure = FALSE while M > 0. Hard: a returned index is a solution."""
    g, coins, meter = _streams(rng)
    n, m = _size_m(g, p)
    mask = gen.marked_mask(g, n, m)
    out = tools.findsol(Oracle.from_array(mask), p["eps_inv"], coins, meter=meter)
    hard = not out.found or bool(mask[out.result])
    return TrialOutcome(m > 0 and not out.found, meter.charged_queries, hard)


@register("minfind", n=1024, n_max=1024, eps_inv=1000.0)
def _minfind_trial(rng, p):
    """minfind on random integers with ties. Hard: visited values strictly decrease."""
    g, coins, meter = _streams(rng)
    n = p["n"] if p["n"] is not None else int(g.integers(1, p["n_max"] + 1))
    values = g.integers(0, max(2, n), size=n)
    trace: list = []
    y = tools.minfind(Oracle.from_array(values), p["eps_inv"], coins, meter, trace)
    hard = all(a > b for a, b in zip(trace, trace[1:])) and trace[-1] == values[y]
    return TrialOutcome(values[y] != values.min(), meter.charged_queries, bool(hard))


@register("findall", n=1024, m=None, m_frac=0.25, n_max=1024, eps_inv=1000.0, storage="hash")
def _findall_trial(rng, p):
    """findall; failure = an incomplete list. Hard: only solutions, no duplicates."""
    g, coins, meter = _streams(rng)
    if p["n"] is None:
        n = int(g.integers(1, p["n_max"] + 1))
        m = int(g.integers(0, min(n, 16) + 1))
    else:
        n = p["n"]
        m = p["m"] if p["m"] is not None else int(round(p["m_frac"] * n))
    mask = gen.marked_mask(g, n, m)
    found = tools.findall(Oracle.from_array(mask), p["eps_inv"], coins, storage=p["storage"], meter=meter)
    hard = len(set(found)) == len(found) and all(mask[i] for i in found)
    return TrialOutcome(len(found) != m, meter.charged_queries, bool(hard))


def _mindiff_reference(f: np.ndarray, labels: np.ndarray, d: int) -> list[float]:
    best: dict = {}
    for fv, lab in zip(f.tolist(), labels.tolist()):
        if lab not in best or fv < best[lab]:
            best[lab] = fv
    vals = sorted(best.values())[:d]
    return vals + [math.inf] * (d - len(vals))


@register("mindiff", n=None, n_max=256, d=None, groups=None, eps_inv=1000.0, c1=9.0, c2=6.0)
def _mindiff_trial(rng, p):
    """mindiff on random flights; failure = not the d cheapest destinations.

    Hard: real entries have distinct labels and their reported F/G values
    match the input; the number of fictitious entries is ``max(0, d - groups)``.
    """
    g, coins, meter = _streams(rng)
    n = p["n"] if p["n"] is not None else int(g.integers(1, p["n_max"] + 1))
    groups = p["groups"] if p["groups"] is not None else int(g.integers(1, min(n, 16) + 1))
    d = p["d"] if p["d"] is not None else int(g.integers(1, 9))
    f = g.integers(0, 4 * n, size=n)
    labels = g.integers(0, groups, size=n)
    log: list = []
    res = tools.mindiff(
        Oracle.from_array(f), Oracle.from_array(labels), d, p["eps_inv"], coins,
        c1=p["c1"], c2=p["c2"], meter=meter, pass_log=log,
    )
    real = [e for e in res if not e.fictitious]
    present = len(set(labels.tolist()))
    hard = (
        len(res) == d
        and len({e.g_value for e in real}) == len(real)
        and all(f[e.index] == e.f_value and labels[e.index] == e.g_value for e in real)
        and len(res) - len(real) == max(0, d - present)
    )
    got = sorted(e.f_value for e in res)
    failed = got != _mindiff_reference(f, labels, d)
    return TrialOutcome(failed, meter.charged_queries, bool(hard), {"passes": len(log), "clean_passes": sum(log)})


@register("threesum", n=None, n_max=24, bound=100, eps_inv=1000.0)
def _threesum_trial(rng, p):
    """3SUM against a triple loop."""
    g, coins, meter = _streams(rng)
    n = p["n"] if p["n"] is not None else int(g.integers(3, p["n_max"] + 1))
    values = g.integers(-p["bound"], p["bound"] + 1, size=n)
    got = tools.threesum(values, p["eps_inv"], coins, meter)
    return TrialOutcome(got != ref.has_zero_triple(values.tolist()), meter.charged_queries)


@register("linear_scan", n=1024)
def _linear_trial(rng, p):
    """Classical scan for one marked item (reference point for the slope fit)."""
    g, _, _ = _streams(rng)
    mask = gen.marked_mask(g, p["n"], 1)
    _, probes = ref.linear_scan(mask)
    return TrialOutcome(False, probes)


@register("synthetic_power", n=16, coef=7.0, exponent=0.5)
def _synthetic_trial(rng, p):
    """Deterministic cost ``coef * n ** exponent`` (tests the fitter itself)."""
    return TrialOutcome(False, p["coef"] * p["n"] ** p["exponent"])


# ---------------------------------------------------------------------------
# graphs


def _vertex_count(g, p) -> int:
    return p["v"] if p["v"] is not None else int(g.integers(2, p["v_max"] + 1))


def _edge_count(g, p, v) -> int:
    if p.get("e") is not None:
        return p["e"]
    if p.get("e_per_v") is not None:
        return int(p["e_per_v"] * v)
    return int(g.integers(0, min(v * (v - 1), 3 * v) + 1))


@register("bfs", size_param="v", v=None, v_max=24, e=None, e_per_v=None, eps_inv=1000.0, model="edgelist")
def _bfs_trial(rng, p):
    """BFS; failure = reachable set differs. Hard: distinct, source first, nondecreasing hops."""
    g, coins, meter = _streams(rng)
    v = _vertex_count(g, p)
    graph = gen.random_digraph(g, v, _edge_count(g, p, v))
    order = graphs.bfs(graph, 0, p["eps_inv"], coins, p["model"], meter)
    hops = ref.hop_distances(graph, 0)
    reach = set(hops)
    hard = len(set(order)) == len(order) and order[0] == 0 and set(order) <= reach
    failed = set(order) != reach or any(hops[a] > hops[b] for a, b in zip(order, order[1:]))
    return TrialOutcome(failed, meter.charged_queries, hard)


@register("dfs", size_param="v", v=None, v_max=24, e=None, e_per_v=None, eps_inv=1000.0, model="edgelist")
def _dfs_trial(rng, p):
    """DFS; failure = not a legal depth-first order. Hard: tree edges exist."""
    g, coins, meter = _streams(rng)
    v = _vertex_count(g, p)
    graph = gen.random_digraph(g, v, _edge_count(g, p, v))
    res = graphs.dfs(graph, 0, p["eps_inv"], coins, p["model"], meter)
    hard = len(set(res.order)) == len(res.order) and all(
        graph.adj[res.parent[u], u] for u in res.order[1:]
    )
    return TrialOutcome(not ref.is_legal_dfs(graph, 0, res.order, res.parent), meter.charged_queries, hard)


def _signed_graph(g, v, e):
    # half the instances are guaranteed free of negative cycles
    if g.random() < 0.5:
        return gen.potential_digraph(g, v, e)
    return gen.random_digraph(g, v, e, weights=(-3, 9))


def _same(a, b) -> bool:
    return a.shape == b.shape and bool(np.all((a == b) | (np.isinf(a) & np.isinf(b))))


@register("spnw", size_param="v", v=None, v_max=24, e=None, e_per_v=None, eps_inv=1000.0, model="edgelist")
def _spnw_trial(rng, p):
    """Negative-weight SSSP vs Bellman-Ford, including negative-cycle verdicts."""
    g, coins, meter = _streams(rng)
    v = _vertex_count(g, p)
    graph = _signed_graph(g, v, _edge_count(g, p, v))
    got = graphs.spnw(graph, 0, p["eps_inv"], coins, p["model"], meter)
    want = ref.bellman_ford(graph, 0)
    if got is FALSE or want is None:
        return TrialOutcome((got is FALSE) != (want is None), meter.charged_queries)
    return TrialOutcome(not _same(got.dist, want), meter.charged_queries, _paths_ok(graph, got))


def _paths_ok(graph, res) -> bool:
    for t in range(graph.V):
        if not math.isfinite(res.dist[t]) or res.prev[t] < 0:
            continue
        path = res.path_to(t)
        if sum(graph.weight[a, b] for a, b in zip(path, path[1:])) != res.dist[t]:
            return False
    return True


@register("sssp", size_param="v", v=None, v_max=24, e=None, e_per_v=None, w_max=10, eps_inv=1000.0, model="edgelist")
def _sssp_trial(rng, p):
    """Nonnegative SSSP vs Dijkstra. Hard: every predecessor path has the reported length."""
    g, coins, meter = _streams(rng)
    v = _vertex_count(g, p)
    graph = gen.random_digraph(g, v, _edge_count(g, p, v), weights=(0, p["w_max"]))
    got = graphs.sssp_nonneg(graph, 0, p["eps_inv"], coins, p["model"], meter)
    return TrialOutcome(not _same(got.dist, ref.dijkstra(graph, 0)), meter.charged_queries, _paths_ok(graph, got))


@register("apsp", size_param="v", v=None, v_max=24, e=None, e_per_v=None, eps_inv=1000.0, model="edgelist")
def _apsp_trial(rng, p):
    """All-pairs distances vs Floyd-Warshall, including negative-cycle verdicts."""
    g, coins, meter = _streams(rng)
    v = _vertex_count(g, p)
    graph = _signed_graph(g, v, _edge_count(g, p, v))
    got = graphs.apsp(graph, p["eps_inv"], coins, p["model"], meter)
    want = ref.floyd_warshall(graph)
    if got is FALSE or want is None:
        return TrialOutcome((got is FALSE) != (want is None), meter.charged_queries)
    return TrialOutcome(not _same(got, want), meter.charged_queries)


@register("matching", size_param="v", v=None, v_max=24, left=None, density=None, eps_inv=1000.0, model="edgelist")
def _matching_trial(rng, p):
    """Bipartite matching size vs Hopcroft-Karp. Hard: the matching is valid."""
    g, coins, meter = _streams(rng)
    v = _vertex_count(g, p)
    if p["left"] is not None:
        left = p["left"]
    else:
        left = int(g.integers(1, v)) if v > 1 else 1
    density = p["density"] if p["density"] is not None else float(g.uniform(0.05, 0.5))
    graph = gen.random_bipartite(g, left, v - left, density)
    got = graphs.bipartite_matching(graph, p["eps_inv"], coins, p["model"], meter)
    return TrialOutcome(got.size != ref.max_matching_size(graph), meter.charged_queries, got.is_valid(graph))


# ---------------------------------------------------------------------------
# geometry and dynamic programming


def _line_count(points, line) -> int:
    return sum(line.contains(q) for q in points)


@register("maxpoints_zn", n=40, dim=2, bound=30, eps_inv=1000.0)
def _zn_trial(rng, p):
    """Most collinear points in Z^n vs brute force. Hard: the line holds the reported count."""
    g, coins, meter = _streams(rng)
    pts = gen.distinct_points(g, p["n"], p["dim"], p["bound"])
    line = geometry.maxpoints_zn(pts, p["eps_inv"], coins, meter)
    rows = [tuple(int(c) for c in q) for q in pts]
    return TrialOutcome(line.count != ref.max_collinear(pts), meter.charged_queries, _line_count(rows, line) == line.count)


@register("maxpoints_r2", n=40, bound=30, eps_inv=1000.0)
def _r2_trial(rng, p):
    """Most collinear points in the plane (exact mode) vs brute force."""
    g, coins, meter = _streams(rng)
    pts = gen.distinct_points(g, p["n"], 2, p["bound"])
    line = geometry.maxpoints_r2(pts, p["eps_inv"], coins, delta=0.0, exact=True, meter=meter)
    rows = [tuple(int(c) for c in q) for q in pts]
    return TrialOutcome(line.count != ref.max_collinear(pts), meter.charged_queries, _line_count(rows, line) == line.count)


@register("coinchange", size_param="target", target=None, target_max=500, max_coins=8, eps_inv=1000.0)
def _coin_trial(rng, p):
    """Fewest coins vs the classical DP. Hard: reconstructed coins sum to the target."""
    g, coins_rng, meter = _streams(rng)
    target = p["target"] if p["target"] is not None else int(g.integers(0, p["target_max"] + 1))
    k = int(g.integers(1, p["max_coins"] + 1))
    denoms = sorted(set(g.integers(1, 51, size=k).tolist()))
    res = dp.coinchange(denoms, target, p["eps_inv"], coins_rng, meter)
    want = ref.min_coins(denoms, target)
    hard = True
    if math.isfinite(res.count):
        used = res.coins(target)
        hard = sum(used) == target and len(used) == res.count and set(used) <= set(denoms)
    return TrialOutcome(res.count != want, meter.charged_queries, hard)


@register("subarray", n=None, n_max=12, eps_inv=1000.0)
def _subarray_trial(rng, p):
    """Maximum-sum rectangle vs brute force. Hard: the reported sum is the rectangle's sum."""
    g, coins, meter = _streams(rng)
    n = p["n"] if p["n"] is not None else int(g.integers(1, p["n_max"] + 1))
    a = g.integers(-9, 10, size=(n, n))
    rect, total = dp.subarray_sum(a, p["eps_inv"], coins, meter)
    inside = a[rect.miny : rect.maxy + 1, rect.minx : rect.maxx + 1]
    hard = rect.miny <= rect.maxy and rect.minx <= rect.maxx and inside.sum() == total
    return TrialOutcome(total != ref.max_subarray(a), meter.charged_queries, bool(hard))
