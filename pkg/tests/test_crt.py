import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lonely_runner.crt import (
    as_best_set,
    best_sets,
    box_contains,
    certify_good,
    check_certificate,
    crt_lonely_time,
    crt_solve,
    delta_bounds,
    in_band,
    quality,
    quality_certify,
    ratio_intervals,
    realizable_scaling,
)
from lonely_runner.gap import gap_at_time

from oracles import quality_by_bisection


def test_best_set_validation():
    assert as_best_set([3, 5]) == (3, 5)
    for bad in [(), (1, 3), (3, 3), (5, 3), (4, 6), (2, 3, 9)]:
        with pytest.raises(ValueError):
            as_best_set(bad)


def test_best_sets_enumeration():
    got = list(best_sets(2, 6))
    brute = [c for c in itertools.combinations(range(2, 7), 2) if math.gcd(*c) == 1]
    assert got == brute
    assert list(best_sets(1, 4)) == [(2,), (3,), (4,)]


@pytest.mark.parametrize(
    "D, a, T, X",
    [((3, 5), (2, 3), 8, (F(2, 3), F(3, 5))),
     ((2, 3), (1, 2), 5, (F(1, 2), F(2, 3))),
     ((2,), (1,), 1, (F(1, 2),))],
)
def test_crt_lonely_time_examples(D, a, T, X):
    lt = crt_lonely_time(D)
    assert (lt.residues, lt.T, lt.positions) == (a, T, X)


def test_crt_cross_module():
    lt = crt_lonely_time((3, 5))
    assert gap_at_time((F(1, 3), F(1, 5)), lt.T) == F(1, 3)


@given(st.lists(st.integers(0, 10**6), min_size=3, max_size=3))
def test_crt_solve(residues):
    moduli = (7, 11, 13)
    x = crt_solve(residues, moduli)
    assert 0 <= x < 1001
    assert all(x % m == r % m for r, m in zip(residues, moduli))


@pytest.mark.parametrize(
    "X, n, inside", [(F(1, 2), 2, True), (F(2, 3), 2, True), (F(1, 4), 2, False), (F(1, 3), 2, True)]
)
def test_in_band(X, n, inside):
    assert in_band(X, n) is inside


def test_delta_bounds_examples():
    b = delta_bounds((3, 5))
    assert b.slack == (0, F(1, 15))
    assert b.delta == (0, F(1, 225))
    assert b.feasible
    assert delta_bounds((3, 5, 7)).delta[0] == F(1, 1260)
    b = delta_bounds((2, 3))
    assert b.slack[0] == F(-1, 12)
    assert not b.feasible


def test_box_contains_examples():
    b = delta_bounds((3, 5))
    assert box_contains((3, 5), b, (F(1, 3), F(1, 5)))
    assert box_contains((3, 5), b, (F(1, 3), F(1, 5) + F(1, 300)))
    assert not box_contains((3, 5), b, (F(1, 3), F(1, 5) + F(1, 200)))
    assert not box_contains((3, 5), b, (F(1, 3) + F(1, 1000), F(1, 5)))


def test_ratio_intervals_examples():
    b = delta_bounds((3, 5))
    [(lo, hi)] = ratio_intervals((3, 5), b)
    assert (lo, hi) == (F(675, 1126), F(675, 1124))
    assert lo < F(3, 5) < hi
    ivs = ratio_intervals((3, 5, 7), delta_bounds((3, 5, 7)))
    assert ivs[0][0] < F(3, 5) < ivs[0][1]
    assert ivs[1][0] < F(5, 7) < ivs[1][1]
    with pytest.raises(ValueError):
        ratio_intervals((2, 3), delta_bounds((2, 3)))


def test_ratio_intervals_degenerate():
    from lonely_runner.crt import DeltaBounds

    zero = DeltaBounds((F(0), F(0)), (F(0), F(0)))
    assert ratio_intervals((3, 4), zero) == [(F(3, 4), F(3, 4))]


def test_realizable_scaling_examples():
    b = delta_bounds((3, 5))
    assert realizable_scaling((3, 5), b, [F(3, 5)]) == F(1, 3)
    assert realizable_scaling((3, 5), b, [F(-3, 5)]) is None
    assert realizable_scaling((3, 5), b, [F(0)]) is None
    # just inside the lower ratio end: delta_1 = 0 pins s = 1/3, so w_2 = R/3
    # must lie within 1/225 of 1/5
    r = F(675, 1126) + F(1, 10**9)
    s = realizable_scaling((3, 5), b, [r])
    assert s == F(1, 3)
    assert box_contains((3, 5), b, (s, s * r))
    # far outside the interval: nothing
    assert realizable_scaling((3, 5), b, [F(7, 10)]) is None


def test_certify_good_examples():
    c = certify_good([F(3, 5)], 10)
    assert c is not None and c.best_set == (3, 5)
    assert check_certificate(c, [F(3, 5)])

    c = certify_good([F(5, 7)], 10)
    assert c.best_set == (5, 7)
    assert c.bounds.slack[0] == F(1, 15)
    assert check_certificate(c, [F(5, 7)])

    assert certify_good([F(1)], 40) is None
    with pytest.raises(ValueError):
        certify_good([F(-1, 2)], 10)


def test_certify_good_returns_first_in_order():
    R = [F(3, 5), F(5, 7)]
    c = certify_good(R, 12)
    assert c.best_set == (3, 5, 7)
    assert c is not None
    # nothing with a smaller product certifies
    for D in best_sets(3, 12):
        if math.prod(D) >= math.prod(c.best_set):
            continue
        b = delta_bounds(D)
        if b.feasible:
            ivs = ratio_intervals(D, b)
            assert not all(lo < r < hi for r, (lo, hi) in zip(R, ivs)) or \
                realizable_scaling(D, b, R) is None


@given(st.integers(0, 10**6))
def test_certify_good_sound_on_random_ratios(seed):
    rng = random.Random(seed)
    D = rng.choice([D for D in best_sets(2, 15) if delta_bounds(D).feasible])
    b = delta_bounds(D)
    [(lo, hi)] = ratio_intervals(D, b)
    R = [lo + (hi - lo) * F(rng.randint(1, 999), 1000)]
    c = certify_good(R, 15)
    assert c is not None
    assert check_certificate(c, R)


def test_box_theorem_sample():
    rng = random.Random(0)
    for D in [(3, 5), (4, 5), (2, 3, 5), (3, 7, 11)]:
        b = delta_bounds(D)
        T = crt_lonely_time(D).T
        for _ in range(50):
            w = [F(1, d) + dv * F(rng.randint(-1000, 1000), 1000) for d, dv in zip(D, b.delta)]
            assert box_contains(D, b, w)
            assert gap_at_time(w, T) >= F(1, len(D) + 1)


def test_quality_examples():
    assert quality((5, 7), 0, F(5, 7), 3) == math.inf
    r = F(5, 7) + F(1, 1000)
    q = quality((5, 7), 0, r, 3)
    assert q != math.inf
    assert abs(q - quality_by_bisection((5, 7), 0, r, 3)) <= F(1, 10**9) * q
    q2 = quality((5, 7), 0, 2, 3)
    assert q2 < 1
    assert abs(q2 - quality_by_bisection((5, 7), 0, F(2), 3)) <= F(1, 10**9) * q2


def test_quality_errors():
    with pytest.raises(ValueError):
        quality((5, 7), 0, 0, 3)
    with pytest.raises(ValueError):
        quality((2, 3), 0, F(2, 3), 2)
    with pytest.raises(ValueError):
        quality_certify([F(2, 3)], (2, 3))


def test_quality_one_zero_slack():
    # one vanishing slack still leaves an open interval around the exact ratio
    assert quality((3, 5), 0, F(3, 5), 2) == math.inf


def test_quality_certify_center():
    assert quality_certify([F(5, 7)], (5, 7))
    assert quality_certify([F(3, 5), F(5, 7)], (3, 5, 7))


@given(st.integers(0, 10**6))
def test_quality_certify_matches_containment(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    D = rng.choice([D for D in best_sets(n, 13) if delta_bounds(D).feasible])
    b = delta_bounds(D)
    ivs = ratio_intervals(D, b)
    R = []
    for lo, hi in ivs:
        w = hi - lo
        R.append(lo + w * F(rng.randint(-500, 1500), 1000))
    R = [r if r > 0 else F(1, 100) for r in R]
    direct = all(lo < r < hi for r, (lo, hi) in zip(R, ivs))
    assert quality_certify(R, D) == direct
