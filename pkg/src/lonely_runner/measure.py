"""How much of ratio space the best-set neighborhoods cover.

Two routes: an exact partial sum of interval-width products over best sets
(a heuristic figure, not a probability), and a seeded Monte Carlo estimate
of the fraction of sampled ratio vectors that ``certify_good`` accepts.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .crt import (
    BestSet,
    DeltaBounds,
    as_best_set,
    best_sets,
    certify_good,
    delta_bounds,
    ratio_intervals,
)
from .gap import as_rat
from .serialize import JsonlWriter, read_jsonl

GENERATOR = "numpy.random.PCG64"
SAMPLE_BITS = 32


@dataclass(frozen=True)
class VolumeTerm:
    best_set: BestSet
    widths: tuple[Fraction, ...]
    term: Fraction


def expanded_widths(D: BestSet, bounds: DeltaBounds, printed_sign: bool = False) -> list[Fraction]:
    """Closed-form widths ``2 (dv_{i+1} D_i + dv_i D_{i+1}) / (D_{i+1}^2 - dv_{i+1}^2)``.

    ``printed_sign=True`` uses a minus between the two numerator terms, which
    does not match the endpoint difference; kept to show the discrepancy.
    """
    dv = bounds.delta
    sign = -1 if printed_sign else 1
    return [
        2 * (dv[i + 1] * D[i] + sign * dv[i] * D[i + 1])
        / ((D[i + 1] - dv[i + 1]) * (D[i + 1] + dv[i + 1]))
        for i in range(len(D) - 1)
    ]


def volume_term(D, n: Optional[int] = None) -> VolumeTerm:
    D = as_best_set(D)
    bounds = delta_bounds(D, n)
    widths = tuple(hi - lo for lo, hi in ratio_intervals(D, bounds))
    if list(widths) != expanded_widths(D, bounds):
        raise AssertionError(f"width forms disagree for {D}")
    return VolumeTerm(D, widths, math.prod(widths, start=Fraction(1)))


def volume_sum(n: int, d_max: int, checkpoint: Optional[os.PathLike] = None) -> Fraction:
    """``2^(n-1)`` times the sum of volume terms over feasible best sets with ``D_n <= d_max``.

    With ``checkpoint``, terms already recorded there are replayed instead of
    recomputed and new ones are appended (one JSON line per best set).
    """
    if n < 2:
        raise ValueError("volume_sum needs n >= 2")
    done: dict[tuple, Fraction] = {}
    if checkpoint is not None:
        for rec in read_jsonl(checkpoint):
            if rec.get("n") == n:
                done[tuple(rec["D"])] = Fraction(rec["term"])
    writer = JsonlWriter(checkpoint) if checkpoint is not None else None
    total = Fraction(0)
    try:
        for D in best_sets(n, d_max):
            if D in done:
                total += done[D]
                continue
            if not delta_bounds(D).feasible:
                continue
            term = volume_term(D).term
            total += term
            if writer is not None:
                writer.write({"n": n, "D": list(D), "term": str(term), "cumulative": str(total)})
    finally:
        if writer is not None:
            writer.close()
    return 2 ** (n - 1) * total


@dataclass(frozen=True)
class CoverageEstimate:
    n: int
    d_max: int
    sample_count: int
    hits: int
    fraction: Fraction
    seed: int
    ratio_low: Fraction
    ratio_high: Fraction
    generator: str = GENERATOR

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d_max": self.d_max,
            "sample_count": self.sample_count,
            "hits": self.hits,
            "fraction": str(self.fraction),
            "seed": self.seed,
            "ratio_low": str(self.ratio_low),
            "ratio_high": str(self.ratio_high),
            "generator": self.generator,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoverageEstimate":
        return cls(
            d["n"], d["d_max"], d["sample_count"], d["hits"], Fraction(d["fraction"]),
            d["seed"], Fraction(d["ratio_low"]), Fraction(d["ratio_high"]), d["generator"],
        )


def sample_ratios(n: int, samples: int, seed: int, low: Fraction, high: Fraction) -> list[tuple]:
    """Ratio vectors with entries ``low + (high - low) k / 2^32``, ``k`` from PCG64."""
    rng = np.random.Generator(np.random.PCG64(seed))
    ks = rng.integers(0, 2**SAMPLE_BITS, size=(samples, n - 1), dtype=np.uint64)
    width = high - low
    scale = 2**SAMPLE_BITS
    return [tuple(low + width * Fraction(int(k), scale) for k in row) for row in ks]


def coverage_monte_carlo(
    n: int,
    d_max: int,
    samples: int,
    seed: int,
    ratio_low=Fraction(1, 10),
    ratio_high=Fraction(9, 10),
    workers: int = 1,
) -> CoverageEstimate:
    low, high = as_rat(ratio_low), as_rat(ratio_high)
    if not 0 < low < high:
        raise ValueError(f"need 0 < ratio_low < ratio_high, got [{low}, {high}]")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if n < 2:
        raise ValueError("coverage needs n >= 2 (at least one ratio)")
    seed = int(seed) & (2**64 - 1)
    draws = sample_ratios(n, samples, seed, low, high)
    # all draws come from one stream, so the thread count cannot change them
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda R: certify_good(R, d_max) is not None, draws))
    else:
        hits = sum(certify_good(R, d_max) is not None for R in draws)
    return CoverageEstimate(n, d_max, samples, hits, Fraction(hits, samples), seed, low, high)
