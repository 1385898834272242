"""How many oracle calls does unstructured search cost?

Runs BBHT and findsol on masks of growing size with a single marked item and
prints the mean charged queries next to the classical scan, then fits the
log-log slope of each.
"""

from __future__ import annotations

import math

from qquery.harness import fit_scaling, run_trials

SIZES = [2**k for k in range(8, 15, 2)]


def main() -> None:
    print(f"{'N':>6}  {'bbht':>8}  {'findsol':>8}  {'scan':>8}  {'sqrt N':>7}")
    for n in SIZES:
        b = run_trials("bbht", 2000, 1, n=n, m=1).cost_mean
        f = run_trials("findsol", 2000, 2, n=n, m=1).cost_mean
        s = run_trials("linear_scan", 2000, 3, n=n).cost_mean
        print(f"{n:>6}  {b:>8.1f}  {f:>8.1f}  {s:>8.1f}  {math.sqrt(n):>7.1f}")

    for name in ("findsol", "linear_scan"):
        params = {"m": 1} if name == "findsol" else {}
        fit = fit_scaling(name, SIZES, 1000, 10, **params)
        print(f"{name}: cost ~ N^{fit.slope:.3f} (r2 {fit.r2:.4f})")


if __name__ == "__main__":
    main()
