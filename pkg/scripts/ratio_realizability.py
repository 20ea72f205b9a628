"""Do ratio vectors inside every ratio interval always scale into the velocity box?

Samples ratios uniformly inside the intervals of each feasible best set and
reports any for which no scaling lands in the box.
"""

import argparse
import random
from fractions import Fraction

from lonely_runner.crt import best_sets, delta_bounds, ratio_intervals, realizable_scaling


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--dmax", type=int, default=20)
    ap.add_argument("--per-set", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    for n in args.n:
        tried = failed = 0
        for D in best_sets(n, args.dmax):
            b = delta_bounds(D)
            if not b.feasible:
                continue
            ivs = ratio_intervals(D, b)
            for _ in range(args.per_set):
                R = [lo + (hi - lo) * Fraction(rng.randint(1, 2**20 - 1), 2**20) for lo, hi in ivs]
                tried += 1
                if realizable_scaling(D, b, R) is None:
                    failed += 1
                    print(f"unrealizable: D={D} R={[str(r) for r in R]}")
        print(f"n={n}: {tried} ratio vectors, {failed} without a scaling")


if __name__ == "__main__":
    main()
