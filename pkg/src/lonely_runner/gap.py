"""Exact loneliness gaps for rational velocity vectors.

One runner stands still at the origin of a circle of circumference 1 and
``n`` runners move with positive velocities ``v_i``.  At time ``t`` the gap is
``min_i ||v_i t||`` where ``||x||`` is the distance from ``x`` to the nearest
integer.  Everything here is computed with :class:`fractions.Fraction`.

The gap ``t -> min_i ||v_i t||`` is piecewise linear.  Its breakpoints are the
kinks of each track, ``t = k / (2 v_i)``, and the times at which two tracks
cross, ``(v_i - v_j) t`` or ``(v_i + v_j) t`` an integer.  Suprema are found by
evaluating the gap at every breakpoint in the range of interest.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

Rat = Fraction
Velocities = tuple[Fraction, ...]


def as_rat(x) -> Fraction:
    """Coerce ``x`` to an exact fraction.  Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def as_velocities(v: Iterable) -> Velocities:
    """Validate a velocity vector: non-empty, every component a positive rational."""
    vel = tuple(as_rat(x) for x in v)
    if not vel:
        raise ValueError("velocity vector must be non-empty")
    if any(x <= 0 for x in vel):
        raise ValueError(f"velocities must be strictly positive, got {[str(x) for x in vel]}")
    return vel


class Method(str, enum.Enum):
    EXACT_SWEEP = "ExactSweep"
    GRID_ORACLE = "GridOracle"


@dataclass(frozen=True)
class GapReport:
    value: Fraction
    witness_time: Fraction
    horizon: Optional[Fraction]  # None: unbounded
    method: Method


class Kind(str, enum.Enum):
    EXACT = "Exact"
    PSEUDO_EXACT = "PseudoExact"
    GAP_EXCEEDS_BOUND = "GapExceedsBound"
    GAP_BELOW_BOUND = "GapBelowBound"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    gap: Fraction
    bound: Fraction
    plateau_start: Optional[Fraction] = None
    plateau_length: Optional[Fraction] = None


def nearest_int_dist(x) -> Fraction:
    x = as_rat(x)
    frac = x - math.floor(x)
    return min(frac, 1 - frac)


def gap_at_time(v: Sequence, t) -> Fraction:
    t = as_rat(t)
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    return min(nearest_int_dist(vi * t) for vi in as_velocities(v))


def _gap(v: Velocities, t: Fraction) -> Fraction:
    # unchecked inner loop version of gap_at_time
    best = None
    for vi in v:
        x = vi * t
        frac = x - (x.numerator // x.denominator)
        d = frac if frac <= Fraction(1, 2) else 1 - frac
        if best is None or d < best:
            best = d
    return best


def period(v: Sequence) -> Fraction:
    """Smallest ``P`` with every ``v_i * P`` an integer; the gap has period ``P``."""
    vel = as_velocities(v)
    lcm = math.lcm(*(x.denominator for x in vel))
    g = math.gcd(*(x.numerator * (lcm // x.denominator) for x in vel))
    return Fraction(lcm, g)


def candidate_times(v: Sequence, horizon) -> list[Fraction]:
    """Sorted breakpoints of the gap function in ``(0, horizon]``, plus ``horizon``."""
    vel = as_velocities(v)
    h = as_rat(horizon)
    if h <= 0:
        raise ValueError("horizon must be positive")
    out = {h}
    rates = [2 * vi for vi in vel]
    for i, vi in enumerate(vel):
        for vj in vel[i + 1:]:
            rates.append(vi + vj)
            if vi != vj:
                rates.append(abs(vi - vj))
    for rate in set(rates):
        top = math.floor(rate * h)
        out.update(k / rate for k in range(1, top + 1))
    return sorted(out)


def _sweep(vel: Velocities, horizon: Fraction) -> tuple[Fraction, Fraction]:
    best_val, best_t = Fraction(-1), None
    for t in candidate_times(vel, horizon):
        g = _gap(vel, t)
        if g > best_val:  # strict: keeps the earliest witness on ties
            best_val, best_t = g, t
    return best_val, best_t


def max_gap(v: Sequence) -> GapReport:
    """Exact ``sup_{t>0} min_i ||v_i t||`` with the earliest witnessing time."""
    vel = as_velocities(v)
    value, t = _sweep(vel, period(vel))
    return GapReport(value, t, None, Method.EXACT_SWEEP)


def finite_horizon_gap(v: Sequence, T1) -> GapReport:
    """Exact ``sup_{0<t<=T1} min_i ||v_i t||``."""
    vel = as_velocities(v)
    T1 = as_rat(T1)
    if T1 <= 0:
        raise ValueError(f"horizon must be positive, got {T1}")
    value, t = _sweep(vel, min(T1, period(vel)))
    return GapReport(value, t, T1, Method.EXACT_SWEEP)


def max_gap_grid_oracle(v: Sequence, steps: int) -> GapReport:
    """Brute-force maximum over ``t = j * P / steps`` for ``j = 1..steps``.

    Uses integer arithmetic only, so it shares nothing with the sweep.  The
    result is a lower bound on the true maximum and falls short of it by at
    most ``max(v) * P / steps``.
    """
    vel = as_velocities(v)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    p = period(vel)
    # v_i * P is an integer; v_i * t_j = (v_i P) j / steps
    w = np.array([int(vi * p) % steps for vi in vel], dtype=np.int64)
    j = np.arange(1, steps + 1, dtype=np.int64)
    r = np.outer(w, j) % steps
    dist = np.minimum(r, steps - r).min(axis=0)
    k = int(np.argmax(dist))
    return GapReport(
        Fraction(int(dist[k]), steps), Fraction(k + 1, steps) * p, None, Method.GRID_ORACLE
    )


def classify(v: Sequence) -> Classification:
    """Compare the global gap with ``1/(n+1)`` and look for a plateau there.

    The running supremum ``S(T)`` of the gap is nondecreasing.  A plateau at
    the bound exists when the gap first touches ``1/(n+1)`` at a breakpoint
    and then stays at or below it for a positive stretch of time.
    """
    vel = as_velocities(v)
    bound = Fraction(1, len(vel) + 1)
    p = period(vel)
    times = [Fraction(0)] + candidate_times(vel, p)
    vals = [_gap(vel, t) for t in times]
    gap = max(vals)
    if gap == bound:
        return Classification(Kind.EXACT, gap, bound)
    if gap < bound:
        return Classification(Kind.GAP_BELOW_BOUND, gap, bound)

    k = next(i for i, val in enumerate(vals) if val >= bound)
    if vals[k] > bound:
        # the gap rises through the bound inside a linear piece
        return Classification(Kind.GAP_EXCEEDS_BOUND, gap, bound)
    start = times[k]
    for j in range(k, len(times) - 1):
        if vals[j + 1] > bound:
            end = times[j] + (bound - vals[j]) / (vals[j + 1] - vals[j]) * (times[j + 1] - times[j])
            break
    else:  # pragma: no cover - gap > bound is attained at some breakpoint
        raise AssertionError("gap exceeds the bound but never rises above it")
    if end > start:
        return Classification(Kind.PSEUDO_EXACT, gap, bound, start, end - start)
    return Classification(Kind.GAP_EXCEEDS_BOUND, gap, bound)
