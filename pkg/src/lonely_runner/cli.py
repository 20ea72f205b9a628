"""Command-line front end.

Exit status: 0 success, 1 domain error (JSON error object on stdout),
2 usage error, 3 a vector with gap below ``1/(n+1)`` was found.

The default sweep cache directory is taken from ``$LONELY_RUNNER_CACHE_DIR``.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .boundary import bisect_to_level, float_lonely_time_search
from .crt import (
    as_best_set,
    certify_good,
    check_certificate,
    crt_lonely_time,
    quality,
    quality_certify,
)
from .gap import Kind, classify, gap_at_time, max_gap, max_gap_grid_oracle
from .measure import coverage_monte_carlo, volume_sum, volume_term
from .serialize import (
    JsonlWriter,
    certificate_to_dict,
    classification_to_dict,
    default_cache_dir,
    dumps,
    gap_report_to_dict,
    lonely_time_to_dict,
    read_jsonl,
)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3
SWEEP_MAX_N, SWEEP_MAX_V = 5, 60
PLAIN_SCALAR = {"gap": "value", "maxgap": "value", "classify": "kind"}

_EXACT = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def exact(s: str) -> Fraction:
    if not _EXACT.match(s):
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer or p/q fraction")
    try:
        return Fraction(s.replace(" ", ""))
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"{s!r} has a zero denominator")


def exact_list(s: str) -> list[Fraction]:
    return [exact(x) for x in s.split(",") if x.strip()]


def int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not a comma-separated integer list")


def float_list(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not a comma-separated float list")


def _fracs(xs) -> list[str]:
    return [str(x) for x in xs]


# -- sweep ------------------------------------------------------------------


def sweep_key(v) -> str:
    return ",".join(str(x) for x in sorted(Fraction(x) for x in v))


def _classify_record(v: tuple[int, ...]) -> dict:
    return {
        "key": sweep_key(v),
        "input": [str(x) for x in v],
        "result": classification_to_dict(classify(v)),
        "tool_version": __version__,
    }


@dataclass
class SweepReport:
    n: int
    v_max: int
    counts: dict = field(default_factory=lambda: {k.value: 0 for k in Kind})
    computed: int = 0
    cached: int = 0
    pseudo_exact: list = field(default_factory=list)
    below_bound: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "v_max": self.v_max,
            "total": sum(self.counts.values()),
            "computed": self.computed,
            "cached": self.cached,
            "counts": self.counts,
            "pseudo_exact": self.pseudo_exact,
            "gap_below_bound": self.below_bound,
        }


def sweep(
    n: int,
    v_max: int,
    cache_path: Optional[Path] = None,
    workers: int = 1,
    limits: bool = True,
    on_record: Optional[Callable[[dict], None]] = None,
) -> SweepReport:
    """Classify every integer vector of ``n`` distinct speeds in ``1..v_max``.

    Vectors are enumerated as increasing tuples (classification ignores
    order).  Records already in the cache are reused, new ones are appended
    in enumeration order.
    """
    if n < 1 or v_max < 1:
        raise ValueError("n and v_max must be positive")
    if limits and (n > SWEEP_MAX_N or v_max > SWEEP_MAX_V):
        raise ValueError(
            f"sweep limited to n <= {SWEEP_MAX_N}, v_max <= {SWEEP_MAX_V}; pass --no-limits to override"
        )
    cached: dict[str, dict] = {}
    if cache_path is not None:
        cached = {rec["key"]: rec for rec in read_jsonl(cache_path) if "key" in rec}
    vectors = list(itertools.combinations(range(1, v_max + 1), n))
    todo = [v for v in vectors if sweep_key(v) not in cached]

    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            fresh = dict(zip(map(sweep_key, todo), pool.map(_classify_record, todo, chunksize=16)))
    else:
        fresh = {sweep_key(v): _classify_record(v) for v in todo}

    report = SweepReport(n, v_max)
    writer = JsonlWriter(cache_path) if cache_path is not None and fresh else None
    try:
        for v in vectors:
            key = sweep_key(v)
            if key in cached:
                rec = cached[key]
                report.cached += 1
            else:
                rec = fresh[key]
                report.computed += 1
                if writer is not None:
                    writer.write(rec)
            kind = rec["result"]["kind"]
            report.counts[kind] += 1
            if kind == Kind.PSEUDO_EXACT.value:
                report.pseudo_exact.append(key)
            elif kind == Kind.GAP_BELOW_BOUND.value:
                report.below_bound.append(key)
            if on_record is not None:
                on_record(rec)
    finally:
        if writer is not None:
            writer.close()
    return report


# -- commands ---------------------------------------------------------------


def cmd_gap(args):
    value = gap_at_time(args.v, args.t)
    return {"v": _fracs(args.v), "t": str(args.t), "value": str(value)}


def cmd_maxgap(args):
    if args.grid:
        return gap_report_to_dict(max_gap_grid_oracle(args.v, args.grid))
    return gap_report_to_dict(max_gap(args.v))


def cmd_classify(args):
    out = classification_to_dict(classify(args.v))
    out["v"] = _fracs(args.v)
    return out


def cmd_crt(args):
    return lonely_time_to_dict(crt_lonely_time(args.d))


def cmd_certify(args):
    cert = certify_good(args.r, args.dmax)
    if cert is None:
        return {"ratios": _fracs(args.r), "d_max": args.dmax, "certificate": None}
    return {
        "ratios": _fracs(args.r),
        "d_max": args.dmax,
        "certificate": certificate_to_dict(cert),
        "sound": check_certificate(cert, args.r),
    }


def cmd_quality(args):
    D = as_best_set(args.d)
    n = args.n or len(D)
    if len(args.r) != len(D) - 1:
        raise ValueError(f"need {len(D) - 1} ratios for {len(D)} divisors, got {len(args.r)}")
    qs = [quality(D, i, r, n) for i, r in enumerate(args.r)]
    return {
        "best_set": list(D),
        "n": n,
        "quality": ["inf" if q == float("inf") else str(q) for q in qs],
        "certified": quality_certify(args.r, D, n),
    }


def cmd_volume(args):
    out = {}
    if args.d:
        t = volume_term(args.d)
        out["term"] = {"best_set": list(t.best_set), "widths": _fracs(t.widths), "term": str(t.term)}
    if args.n:
        cache = args.cache
        total = volume_sum(args.n, args.dmax, checkpoint=cache)
        out.update(
            n=args.n,
            d_max=args.dmax,
            sum=str(total),
            note="heuristic partial sum over best sets only; the 2^(n-1) sign factor is applied "
            "but its applicability to this sum is unverified",
        )
    if not out:
        raise ValueError("volume needs --d and/or --n")
    return out


def cmd_coverage(args):
    est = coverage_monte_carlo(
        args.n, args.dmax, args.samples, args.seed, args.low, args.high, workers=args.workers
    )
    return est.to_dict()


def cmd_bisect(args):
    res = bisect_to_level(args.a, args.b, args.t1, args.target, args.tol, args.max_iter)
    return {
        "lambda": str(res.line_point.lam),
        "point": _fracs(res.line_point.point),
        "value": str(res.value),
        "iterations": res.iterations,
        "converged": res.converged,
    }


def cmd_floatsearch(args):
    res = float_lonely_time_search(args.v, args.epsilon, args.tmax, args.step)
    if res is None:
        return {"found": False}
    return {
        "found": True,
        "time": res.time,
        "min_gap": res.min_gap,
        "epsilon": res.epsilon,
        "steps_taken": res.steps_taken,
    }


def cmd_sweep(args):
    cache = args.cache
    if cache is None and default_cache_dir() is not None:
        cache = default_cache_dir() / f"sweep-n{args.n}-v{args.vmax}.jsonl"
    return sweep(args.n, args.vmax, cache, workers=args.workers, limits=not args.no_limits).to_dict()


# -- output -----------------------------------------------------------------


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = ";".join(json.dumps(x) if isinstance(x, (list, dict)) else str(x) for x in v)
        else:
            out[key] = "" if v is None else v
    return out


def render(obj: dict, fmt: str, scalar: Optional[str] = None) -> str:
    """``scalar`` names the field printed alone in plain mode, if any."""
    if fmt == "json":
        return dumps(obj)
    flat = _flatten(obj)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        w.writeheader()
        w.writerow(flat)
        return buf.getvalue().rstrip("\n")
    if scalar is not None:
        return str(flat[scalar])
    return "\n".join(f"{k}: {v}" for k, v in flat.items())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["json", "csv", "plain"], default="json")

    p = argparse.ArgumentParser(prog="lonely-runner", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("gap", cmd_gap, "gap min_i ||v_i t|| at one time")
    sp.add_argument("--v", type=exact_list, required=True)
    sp.add_argument("--t", type=exact, required=True)

    sp = add("maxgap", cmd_maxgap, "exact global gap")
    sp.add_argument("--v", type=exact_list, required=True)
    sp.add_argument("--grid", type=int, default=0, help="use the grid oracle with this many steps")

    sp = add("classify", cmd_classify, "exact / pseudo-exact classification")
    sp.add_argument("--v", type=exact_list, required=True)

    sp = add("crt", cmd_crt, "CRT lonely time of a best set")
    sp.add_argument("--d", type=int_list, required=True)

    sp = add("certify", cmd_certify, "search a best set certifying a ratio vector")
    sp.add_argument("--r", type=exact_list, required=True)
    sp.add_argument("--dmax", type=int, required=True)

    sp = add("quality", cmd_quality, "quality of each ratio approximation")
    sp.add_argument("--d", type=int_list, required=True)
    sp.add_argument("--r", type=exact_list, required=True)
    sp.add_argument("--n", type=int, default=None)

    sp = add("volume", cmd_volume, "interval-width volume term / partial sum")
    sp.add_argument("--d", type=int_list, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--dmax", type=int, default=10)
    sp.add_argument("--cache", type=Path, default=None, help="JSON-lines checkpoint")

    sp = add("coverage", cmd_coverage, "Monte Carlo coverage of ratio space")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dmax", type=int, required=True)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--low", type=exact, default=Fraction(1, 10))
    sp.add_argument("--high", type=exact, default=Fraction(9, 10))
    sp.add_argument("--workers", type=int, default=1)

    sp = add("bisect", cmd_bisect, "bisect a segment to a finite-horizon gap level")
    sp.add_argument("--a", type=exact_list, required=True)
    sp.add_argument("--b", type=exact_list, required=True)
    sp.add_argument("--t1", type=exact, required=True)
    sp.add_argument("--target", type=exact, required=True)
    sp.add_argument("--tol", type=exact, default=Fraction(1, 10**6))
    sp.add_argument("--max-iter", type=int, default=200)

    sp = add("floatsearch", cmd_floatsearch, "float grid search for a lonely time")
    sp.add_argument("--v", type=float_list, required=True)
    sp.add_argument("--epsilon", type=float, default=1e-6)
    sp.add_argument("--tmax", type=float, default=100.0)
    sp.add_argument("--step", type=float, default=None)

    sp = add("sweep", cmd_sweep, "classify all integer vectors up to v_max")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--vmax", type=int, required=True)
    sp.add_argument("--cache", type=Path, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-limits", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.fn(args)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        print(dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_DOMAIN
    except OSError as exc:
        print(dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_DOMAIN
    print(render(out, args.output, PLAIN_SCALAR.get(args.command)))

    below = (args.command == "classify" and out["kind"] == Kind.GAP_BELOW_BOUND.value) or (
        args.command == "sweep" and out["gap_below_bound"]
    )
    if below:
        print("!" * 72, file=sys.stderr)
        print("COUNTEREXAMPLE: gap below 1/(n+1) found -- verify immediately", file=sys.stderr)
        print(dumps(out), file=sys.stderr)
        print("!" * 72, file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
