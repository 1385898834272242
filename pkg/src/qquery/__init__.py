"""Quantum search algorithms simulated in the oracle query model.

Outcomes of Grover runs are sampled from their exact probabilities and
every oracle call is charged to a :class:`Meter`, so query counts (not
wall-clock time) are the unit of cost.
"""

from __future__ import annotations

from .dp import CoinResult, Rect, SumTable, coinchange, subarray_sum
from .geometry import Line, maxpoints_r2, maxpoints_zn, mup, mup2
from .graphs import (
    DfsResult,
    DistArray,
    GraphOracle,
    Matching,
    apsp,
    bfs,
    bipartite_matching,
    dfs,
    read_graph,
    spnw,
    sssp_nonneg,
)
from .oracle import FALSE, Domain, EpsilonBudget, Meter, Oracle, RngStream
from .primitives import (
    BBHT_ORIGINAL,
    BbhtConfig,
    SearchOutcome,
    bbht,
    bcwz,
    f_theta,
    f_theta_closed,
    grover_run,
    lambda_sweep,
    m0_bound,
    tan_fixed_points,
)
from .tools import ArrayMarks, Fictitious, MindiffEntry, findall, findsol, maxfind, mindiff, minfind, threesum

__version__ = "0.1.0"

__all__ = [
    "FALSE", "Domain", "EpsilonBudget", "Meter", "Oracle", "RngStream",
    "BBHT_ORIGINAL", "BbhtConfig", "SearchOutcome", "bbht", "bcwz", "f_theta", "f_theta_closed",
    "grover_run", "lambda_sweep", "m0_bound", "tan_fixed_points",
    "ArrayMarks", "Fictitious", "MindiffEntry", "findall", "findsol", "maxfind", "mindiff", "minfind", "threesum",
    "DfsResult", "DistArray", "GraphOracle", "Matching", "apsp", "bfs", "bipartite_matching", "dfs",
    "read_graph", "spnw", "sssp_nonneg",
    "Line", "maxpoints_r2", "maxpoints_zn", "mup", "mup2",
    "CoinResult", "Rect", "SumTable", "coinchange", "subarray_sum",
]
