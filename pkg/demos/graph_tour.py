"""Graph searches on a random network, checked against networkx.

Builds a sparse random digraph whose negative weights come from vertex
potentials (so there is no negative cycle), then runs BFS, negative-weight
shortest paths and all-pairs distances and compares with the classical
answers.
"""

from __future__ import annotations

import numpy as np

from qquery import Meter, RngStream, apsp, bfs, spnw
from qquery.harness import baselines
from qquery.harness.generators import potential_digraph


def main() -> None:
    g = potential_digraph(np.random.default_rng(4), 16, 48)
    print(g, "min weight", min(w for _, _, w in g.edges))
    rng = RngStream(4)

    meter = Meter()
    order = bfs(g, 0, 1000, rng, meter=meter)
    print(f"bfs visits {len(order)} vertices, same as classical: "
          f"{set(order) == baselines.reachable_set(g, 0)} ({meter.charged_queries} queries)")

    meter = Meter()
    sp = spnw(g, 0, 1000, rng, meter=meter)
    bf = baselines.bellman_ford(g, 0)
    print(f"spnw matches Bellman-Ford: {np.array_equal(sp.dist, bf)} ({meter.charged_queries} queries)")
    far = int(np.nanargmax(np.where(np.isfinite(sp.dist), sp.dist, np.nan)))
    print(f"  a longest shortest path: {sp.path_to(far)} with length {sp.dist[far]:g}")

    meter = Meter()
    d = apsp(g, 1000, rng, meter=meter)
    print(f"apsp matches Floyd-Warshall: {np.array_equal(d, baselines.floyd_warshall(g))} "
          f"({meter.charged_queries} queries)")


if __name__ == "__main__":
    main()
