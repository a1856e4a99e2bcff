"""Sweep interval-pair areas and tabulate the concentration ceiling.

For centered near-square interval pairs X x Y the largest eigenvalue a0
of Q(X)P(Y)Q(X) controls how well a state can sit in both intervals at
once: prob(Q in X) + prob(P in Y) <= 1 + sqrt(a0).  The curve a0(area)
rises toward 1 as the area grows past 2*pi*hbar.
"""

import argparse
import math

import numpy as np

from uncertlab import GridSpec, largest_a0
from uncertlab.reporting import write_series_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--extent", type=float, default=32.0)
    ap.add_argument("--amin", type=float, default=0.25, help="smallest area / 2*pi*hbar")
    ap.add_argument("--amax", type=float, default=10.0, help="largest area / 2*pi*hbar")
    ap.add_argument("--points", type=int, default=24)
    ap.add_argument("--out", default="landau_pollak_curve.csv")
    args = ap.parse_args()

    grid = GridSpec.centered(args.n, args.extent)
    two_pi_h = 2.0 * math.pi * grid.hbar
    rows = []
    seen = set()
    for s in np.linspace(args.amin, args.amax, args.points):
        side = math.sqrt(s * two_pi_h)
        res = largest_a0(grid, (-side / 2, side / 2), (-side / 2, side / 2))
        if (res.count_x, res.count_y) in seen:
            continue
        seen.add((res.count_x, res.count_y))
        rows.append((res.length_x * res.length_y / two_pi_h, res.a0, 1.0 + math.sqrt(res.a0)))
    rows.sort(key=lambda r: r[0])

    print(f"{'area/2pi*hbar':>14} {'a0':>10} {'1+sqrt(a0)':>12}")
    for area, a0, bound in rows:
        print(f"{area:14.4f} {a0:10.6f} {bound:12.6f}")
    write_series_csv(args.out, ["area_over_2pi_hbar", "a0", "probsum_bound"], rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
