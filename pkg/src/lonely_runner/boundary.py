"""Gap along a segment in velocity space, level-set bisection, float search.

The finite-horizon gap ``G(v) = sup_{0<t<=T1} min_i ||v_i t||`` is
``T1``-Lipschitz in each velocity, so along the segment from ``a`` to ``b`` it
is continuous in the parameter ``lam``.  Bisection on ``lam`` therefore finds
a point where ``G`` hits any level lying between its endpoint values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .gap import Velocities, as_rat, as_velocities, finite_horizon_gap


@dataclass(frozen=True)
class LinePoint:
    endpoint_a: Velocities
    endpoint_b: Velocities
    lam: Fraction
    point: Velocities


@dataclass(frozen=True)
class BisectionResult:
    line_point: LinePoint
    value: Fraction
    iterations: int
    converged: bool
    # (lam_lo, lam_hi, G(lam_lo), G(lam_hi)) before each halving
    brackets: list = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class FloatSearchResult:
    time: float
    min_gap: float
    epsilon: float
    steps_taken: int


def line_point(a: Sequence, b: Sequence, lam) -> LinePoint:
    a_ = tuple(as_rat(x) for x in a)
    b_ = tuple(as_rat(x) for x in b)
    if len(a_) != len(b_):
        raise ValueError("endpoints differ in dimension")
    lam = as_rat(lam)
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    pt = tuple((1 - lam) * x + lam * y for x, y in zip(a_, b_))
    return LinePoint(a_, b_, lam, as_velocities(pt))


def horizon_gap_along_line(a: Sequence, b: Sequence, lam, T1) -> Fraction:
    return finite_horizon_gap(line_point(a, b, lam).point, T1).value


def bisect_to_level(
    a: Sequence, b: Sequence, T1, target, tol, max_iter: int = 200
) -> BisectionResult:
    """Halve ``[0, 1]`` keeping ``G(lo)`` and ``G(hi)`` on opposite sides of ``target``.

    Stops at the first midpoint whose exact gap is within ``tol`` of
    ``target``; otherwise returns the last midpoint with ``converged=False``.
    The gap need not be monotone along the segment, so this finds some
    crossing, not necessarily the first one.
    """
    target, tol, T1 = as_rat(target), as_rat(tol), as_rat(T1)
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = Fraction(0), Fraction(1)
    g_lo = horizon_gap_along_line(a, b, lo, T1)
    g_hi = horizon_gap_along_line(a, b, hi, T1)
    if not (min(g_lo, g_hi) < target < max(g_lo, g_hi)):
        raise ValueError(f"endpoint gaps {g_lo}, {g_hi} do not straddle {target}")
    brackets = []
    mid, g_mid = lo, g_lo
    for it in range(1, max_iter + 1):
        brackets.append((lo, hi, g_lo, g_hi))
        mid = (lo + hi) / 2
        g_mid = horizon_gap_along_line(a, b, mid, T1)
        if abs(g_mid - target) <= tol:
            return BisectionResult(line_point(a, b, mid), g_mid, it, True, brackets)
        if (g_mid < target) == (g_lo < target):
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    return BisectionResult(line_point(a, b, mid), g_mid, max_iter, False, brackets)


def float_lonely_time_search(
    v: Sequence[float],
    epsilon: float,
    t_max: float,
    step: Optional[float] = None,
    chunk: int = 1 << 20,
) -> Optional[FloatSearchResult]:
    """First grid time ``k * step <= t_max`` with every runner ``>= 1/(n+1) - epsilon`` from 0.

    Heuristic, double precision.  The default step ``epsilon / (2 max v)``
    keeps the sampled trajectory within ``epsilon / 2`` of any time it skips.
    """
    vel = np.asarray(v, dtype=float)
    if vel.ndim != 1 or vel.size == 0 or np.any(vel <= 0) or not np.all(np.isfinite(vel)):
        raise ValueError("velocities must be finite and positive")
    if epsilon <= 0 or t_max <= 0:
        raise ValueError("epsilon and t_max must be positive")
    if step is None:
        step = epsilon / (2 * float(vel.max()))
    if step <= 0:
        raise ValueError("step must be positive")
    level = 1.0 / (vel.size + 1) - epsilon
    total = int(math.floor(t_max / step))
    for start in range(1, total + 1, chunk):
        k = np.arange(start, min(start + chunk, total + 1), dtype=np.float64)
        t = k * step
        x = np.outer(vel, t)
        gaps = np.abs(x - np.rint(x)).min(axis=0)
        hit = np.flatnonzero(gaps >= level)
        if hit.size:
            j = int(hit[0])
            return FloatSearchResult(float(t[j]), float(gaps[j]), epsilon, int(k[j]))
    return None
