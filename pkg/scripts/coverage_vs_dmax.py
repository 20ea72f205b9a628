"""Monte Carlo coverage and the exact width sum as D_max grows (CSV on stdout)."""

import argparse
from fractions import Fraction

from lonely_runner.measure import coverage_monte_carlo, volume_sum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--dmax", type=int, nargs="+", default=[5, 10, 20, 40])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    width = Fraction(4, 5)  # default sampling box [1/10, 9/10] per ratio
    print("d_max,hits,samples,fraction,width_sum,width_sum_over_box")
    for d in args.dmax:
        est = coverage_monte_carlo(args.n, d, args.samples, args.seed, workers=args.workers)
        s = volume_sum(args.n, d)
        box = width ** (args.n - 1)
        print(f"{d},{est.hits},{est.sample_count},{float(est.fraction):.6f},{float(s):.6g},{float(s / box):.6g}")


if __name__ == "__main__":
    main()
