"""The cheapest flight to each of the d cheapest destinations.

mindiff looks for the d smallest prices whose destinations are pairwise
different.  With fewer destinations than d, the answer is padded with
fictitious entries.
"""

from __future__ import annotations

import numpy as np

from qquery import Meter, Oracle, RngStream, mindiff

FLIGHTS = [
    (410, "Lisbon"), (385, "Oslo"), (299, "Lisbon"), (520, "Tokyo"),
    (275, "Oslo"), (640, "Lima"), (330, "Rome"), (355, "Rome"),
]


def main() -> None:
    prices = np.array([p for p, _ in FLIGHTS])
    places = np.array([c for _, c in FLIGHTS], dtype=object)
    for d in (2, 4, 7):
        meter = Meter()
        res = mindiff(Oracle.from_array(prices), Oracle.from_array(places), d, 1000, RngStream(d), meter=meter)
        picks = ", ".join("-" if e.fictitious else f"{e.g_value} {e.f_value:.0f}" for e in sorted(res, key=lambda e: e.f_value))
        print(f"d={d}: {picks}   ({meter.charged_queries} queries)")


if __name__ == "__main__":
    main()
