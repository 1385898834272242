"""Dynamic programming and geometry driven by minimum finding.

Change for 40 cents with and without a 20-cent coin, the best rectangle in a
small matrix, and the line through the most points of a planted point set.
"""

from __future__ import annotations

import numpy as np

from qquery import RngStream, coinchange, maxpoints_r2, maxpoints_zn, subarray_sum


def main() -> None:
    rng = RngStream(7)
    for coins in ([1, 5, 10, 25], [1, 5, 10, 20, 25]):
        res = coinchange(coins, 40, 1000, rng)
        print(f"coins {coins}: 40 = {' + '.join(map(str, sorted(res.coins(), reverse=True)))}")

    a = np.array([[2, -7, 3, 1], [-1, 4, 5, -9], [0, 6, -2, 3], [-8, 1, 1, -4]])
    rect, total = subarray_sum(a, 1000, rng)
    print(f"best rectangle rows {rect.miny}..{rect.maxy}, cols {rect.minx}..{rect.maxx}: sum {total:g}")

    gen = np.random.default_rng(7)
    pts = {tuple(int(c) for c in gen.integers(-20, 21, size=2)) for _ in range(30)}
    pts |= {(k, 2 * k - 3) for k in range(-4, 5)}
    pts = sorted(pts)
    zn = maxpoints_zn(pts, 1000, rng)
    r2 = maxpoints_r2(pts, 1000, rng, delta=0, exact=True)
    print(f"{len(pts)} points: Z^n search finds {zn.count} on {zn.base} + t{zn.direction}; "
          f"angular sort finds {r2.count}")


if __name__ == "__main__":
    main()
