"""Best sets, CRT lonely times and certified neighborhoods of velocity space.

A best set is a strictly increasing tuple of pairwise coprime integers
``D_1 < ... < D_n`` (each at least 2) standing for the velocities
``(1/D_1, ..., 1/D_n)``.  The Chinese Remainder Theorem gives an integer time
``T`` at which runner ``i`` sits at ``a_i / D_i`` with ``a_i`` the integer
nearest ``D_i / 2``.  Velocities within ``delta_i`` of ``1/D_i`` stay at least
``1/(n+1)`` from the origin at that same time ``T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence, Union

from .gap import as_rat, as_velocities, gap_at_time

BestSet = tuple[int, ...]
Interval = tuple[Fraction, Fraction]
ExtendedRat = Union[Fraction, float]  # float only ever holds math.inf

HALF = Fraction(1, 2)


def as_best_set(D: Iterable[int]) -> BestSet:
    D = tuple(int(d) for d in D)
    if not D:
        raise ValueError("a best set needs at least one element")
    if any(d < 2 for d in D):
        raise ValueError(f"every D_i must be >= 2, got {D}")
    if any(a >= b for a, b in zip(D, D[1:])):
        raise ValueError(f"D must be strictly increasing, got {D}")
    for i, a in enumerate(D):
        for b in D[i + 1:]:
            if math.gcd(a, b) != 1:
                raise ValueError(f"D must be pairwise coprime; gcd({a}, {b}) = {math.gcd(a, b)}")
    return D


def best_sets(n: int, d_max: int) -> Iterator[BestSet]:
    """All best sets of size ``n`` with ``D_n <= d_max``, in lexicographic order."""

    def extend(prefix: tuple[int, ...], lo: int) -> Iterator[BestSet]:
        if len(prefix) == n:
            yield prefix
            return
        for d in range(lo, d_max + 1):
            if all(math.gcd(d, p) == 1 for p in prefix):
                yield from extend(prefix + (d,), d + 1)

    if n < 1:
        return iter(())
    return extend((), 2)


@dataclass(frozen=True)
class LonelyTime:
    T: int
    residues: tuple[int, ...]
    positions: tuple[Fraction, ...]


def crt_solve(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Least nonnegative ``x`` with ``x = r_i (mod m_i)`` for pairwise coprime moduli."""
    M = math.prod(moduli)
    x = 0
    for r, m in zip(residues, moduli):
        Mi = M // m
        x += r * Mi * pow(Mi, -1, m)
    return x % M


def crt_lonely_time(D: Iterable[int]) -> LonelyTime:
    D = as_best_set(D)
    # nearest integer to D/2; odd D rounds half up, even D is exact
    a = tuple((d + 1) // 2 for d in D)
    T = crt_solve(a, D)
    if T == 0:
        T = math.prod(D)
    return LonelyTime(T, a, tuple(Fraction(T % d, d) for d in D))


def in_band(X, n: int) -> bool:
    X = as_rat(X)
    return Fraction(1, n + 1) <= X <= Fraction(n, n + 1)


@dataclass(frozen=True)
class DeltaBounds:
    delta: tuple[Fraction, ...]
    slack: tuple[Fraction, ...]

    @property
    def feasible(self) -> bool:
        return all(c >= 0 for c in self.slack)


def slack(d: int, n: int) -> Fraction:
    return HALF - Fraction(1, n + 1) - Fraction(1, 2 * d)


def delta_bounds(D: Iterable[int], n: Optional[int] = None) -> DeltaBounds:
    """Perturbation radii ``delta_i = (1/2 - 1/(n+1) - 1/(2 D_i)) / prod(D)``.

    Infeasible sets (some slack negative) are returned with the flag off
    rather than rejected.
    """
    D = as_best_set(D)
    if n is None:
        n = len(D)
    elif n != len(D):
        raise ValueError(f"n = {n} does not match len(D) = {len(D)}")
    c = tuple(slack(d, n) for d in D)
    prod = math.prod(D)
    return DeltaBounds(tuple(ci / prod for ci in c), c)


def box_contains(D: Iterable[int], bounds: DeltaBounds, w: Sequence) -> bool:
    D = tuple(D)
    w = as_velocities(w)
    if len(w) != len(D):
        raise ValueError("w and D differ in length")
    return all(abs(wi - Fraction(1, d)) <= dv for wi, d, dv in zip(w, D, bounds.delta))


def ratio_intervals(D: Iterable[int], bounds: DeltaBounds) -> list[Interval]:
    """Open intervals ``((D_i - dv_i)/(D_{i+1} + dv_{i+1}), (D_i + dv_i)/(D_{i+1} - dv_{i+1}))``."""
    D = tuple(D)
    if not bounds.feasible:
        raise ValueError(f"bounds for {D} are infeasible (negative slack)")
    dv = bounds.delta
    return [
        ((D[i] - dv[i]) / (D[i + 1] + dv[i + 1]), (D[i] + dv[i]) / (D[i + 1] - dv[i + 1]))
        for i in range(len(D) - 1)
    ]


def realizable_scaling(D: Iterable[int], bounds: DeltaBounds, R: Sequence) -> Optional[Fraction]:
    """Scale ``s`` putting ``(s, s R_1, s R_1 R_2, ...)`` inside the velocity box.

    Each coordinate confines ``s`` to a closed interval; the midpoint of their
    intersection is returned, or ``None`` when it is empty.
    """
    D = tuple(D)
    R = tuple(as_rat(r) for r in R)
    if len(R) != len(D) - 1:
        raise ValueError("need len(R) == len(D) - 1")
    if any(r <= 0 for r in R):
        return None
    lo, hi = Fraction(0), None
    p = Fraction(1)
    for k, (d, dv) in enumerate(zip(D, bounds.delta)):
        if k:
            p *= R[k - 1]
        a, b = (Fraction(1, d) - dv) / p, (Fraction(1, d) + dv) / p
        lo = max(lo, a)
        hi = b if hi is None else min(hi, b)
    if hi is None or lo > hi or hi <= 0:
        return None
    s = (lo + hi) / 2
    return s if s > 0 else None


@dataclass(frozen=True)
class GoodCertificate:
    best_set: BestSet
    lonely_time: LonelyTime
    bounds: DeltaBounds
    ratio_intervals: tuple[Interval, ...]
    scale_witness: Optional[Fraction]


@lru_cache(maxsize=64)
def _feasible_catalogue(n: int, d_max: int) -> tuple:
    entries = []
    for D in best_sets(n, d_max):
        bounds = delta_bounds(D)
        if bounds.feasible:
            entries.append((math.prod(D), D, bounds, tuple(ratio_intervals(D, bounds))))
    entries.sort(key=lambda e: (e[0], e[1]))
    return tuple(entries)


def certify_good(R: Sequence, d_max: int) -> Optional[GoodCertificate]:
    """First best set (by product, then lexicographically) certifying ``R``.

    A best set certifies when its bounds are feasible, each ``R_i`` lies
    strictly inside its ratio interval, and some scaling of ``R`` lands in the
    velocity box.
    """
    R = tuple(as_rat(r) for r in R)
    if not R:
        raise ValueError("ratio vector must have at least one entry")
    if any(r <= 0 for r in R):
        raise ValueError("ratios must be positive")
    for _, D, bounds, intervals in _feasible_catalogue(len(R) + 1, int(d_max)):
        if all(lo < r < hi for r, (lo, hi) in zip(R, intervals)):
            s = realizable_scaling(D, bounds, R)
            if s is not None:
                return GoodCertificate(D, crt_lonely_time(D), bounds, intervals, s)
    return None


def certificate_velocities(cert: GoodCertificate, R: Sequence) -> tuple[Fraction, ...]:
    """The velocity vector ``(s, s R_1, ...)`` realised by the certificate's scale."""
    w = [cert.scale_witness]
    for r in R:
        w.append(w[-1] * as_rat(r))
    return tuple(w)


def check_certificate(cert: GoodCertificate, R: Sequence) -> bool:
    """Independent soundness gate: box membership and gap at ``T``."""
    w = certificate_velocities(cert, R)
    n = len(cert.best_set)
    return box_contains(cert.best_set, cert.bounds, w) and gap_at_time(
        w, cert.lonely_time.T
    ) >= Fraction(1, n + 1)


def quality(D: Sequence[int], i: int, r, n: int) -> ExtendedRat:
    """Largest ``P = prod(D) / (D_i D_{i+1})`` keeping ``r`` inside interval ``i``.

    ``i`` is zero-based.  With ``c_k`` the slack of ``D_k``, the interval
    reads ``D_i - r D_{i+1} < (c_i + r c_{i+1}) / (P D_i D_{i+1})`` on the left
    and ``r D_{i+1} - D_i < (c_i + r c_{i+1}) / (P D_i D_{i+1})`` on the right.
    Returns ``math.inf`` if neither side binds, and ``0`` if no positive ``P``
    works.
    """
    r = as_rat(r)
    if r <= 0:
        raise ValueError("ratio must be positive")
    if not 0 <= i < len(D) - 1:
        raise ValueError(f"index {i} out of range for {len(D)} divisors")
    di, dj = D[i], D[i + 1]
    ci, cj = slack(di, n), slack(dj, n)
    if ci < 0 or cj < 0:
        raise ValueError(f"infeasible slack for ({di}, {dj}) at n = {n}")
    num = ci + r * cj
    q: ExtendedRat = math.inf
    for gap in (di - r * dj, r * dj - di):
        if gap > 0:
            q = min(q, num / (gap * di * dj))
        elif gap == 0 and num == 0:
            # lo == hi == r: the strict inequality never holds
            q = Fraction(0)
    return q


def quality_certify(R: Sequence, D: Sequence[int], n: Optional[int] = None) -> bool:
    """``R`` is good for ``D`` iff every ``prod(D) / (D_i D_{i+1})`` beats its quality."""
    D = as_best_set(D)
    n = len(D) if n is None else n
    R = tuple(as_rat(r) for r in R)
    if len(R) != len(D) - 1:
        raise ValueError("need len(R) == len(D) - 1")
    prod = math.prod(D)
    return all(
        Fraction(prod, D[i] * D[i + 1]) < quality(D, i, R[i], n) for i in range(len(R))
    )
