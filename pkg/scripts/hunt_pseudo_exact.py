"""List pseudo-exact integer velocity vectors, with their plateaus.

    python scripts/hunt_pseudo_exact.py --n 3 --vmax 12 --cache runs/sweep-n3.jsonl
"""

import argparse
from fractions import Fraction
from pathlib import Path

from lonely_runner.cli import sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--vmax", type=int, default=20)
    ap.add_argument("--cache", type=Path, default=None)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    rows = []

    def keep(rec):
        res = rec["result"]
        if res["kind"] == "PseudoExact":
            rows.append((rec["key"], res["gap"], res["plateau_start"], res["plateau_length"]))

    rep = sweep(args.n, args.vmax, args.cache, workers=args.workers, on_record=keep)
    print("key,gap,plateau_start,plateau_length")
    for row in sorted(rows, key=lambda r: -Fraction(r[3])):
        print(",".join(row))
    print(f"# {rep.counts} computed={rep.computed} cached={rep.cached}")


if __name__ == "__main__":
    main()
