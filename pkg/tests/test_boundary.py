import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lonely_runner.boundary import (
    bisect_to_level,
    float_lonely_time_search,
    horizon_gap_along_line,
    line_point,
)
from lonely_runner.gap import finite_horizon_gap, gap_at_time


def test_line_point():
    p = line_point((1, 2), (1, 3), F(1, 4))
    assert p.point == (1, F(9, 4))
    with pytest.raises(ValueError):
        line_point((1, 2), (1, 3), F(5, 4))
    with pytest.raises(ValueError):
        line_point((1,), (1, 3), 0)
    with pytest.raises(ValueError):
        line_point((1, 1), (-1, 3), 1)


def test_horizon_gap_along_line_examples():
    a, b = (1, 2), (1, 3)
    assert horizon_gap_along_line(a, b, 0, 1) == finite_horizon_gap(a, 1).value == F(1, 3)
    assert horizon_gap_along_line(a, b, 1, 1) == F(1, 2)


@given(st.fractions(0, 1, max_denominator=64), st.fractions(0, 1, max_denominator=64),
       st.fractions(F(1, 4), 3, max_denominator=8))
def test_lipschitz_along_line(l1, l2, T1):
    a, b = (F(1), F(2), F(7, 2)), (F(3, 2), F(3), F(5))
    g1 = horizon_gap_along_line(a, b, l1, T1)
    g2 = horizon_gap_along_line(a, b, l2, T1)
    assert abs(g1 - g2) <= T1 * abs(l1 - l2) * max(abs(x - y) for x, y in zip(a, b))


def test_bisect_example():
    target, tol = F(2, 5), F(1, 10**6)
    res = bisect_to_level((1, 2), (1, 3), 1, target, tol, max_iter=40)
    assert res.converged
    assert res.iterations <= 40
    assert abs(res.value - target) <= tol
    assert res.value == finite_horizon_gap(res.line_point.point, 1).value
    for k, (lo, hi, g_lo, g_hi) in enumerate(res.brackets):
        assert hi - lo == F(1, 2**k)
        assert min(g_lo, g_hi) < target < max(g_lo, g_hi)


def test_bisect_loose_tolerance():
    res = bisect_to_level((1, 2), (1, 3), 1, F(2, 5), F(1, 4))
    assert res.iterations <= 2


def test_bisect_requires_straddle():
    with pytest.raises(ValueError):
        bisect_to_level((1, 2), (1, 3), 1, F(1, 4), F(1, 100))
    with pytest.raises(ValueError):
        bisect_to_level((1, 2), (1, 3), 1, F(2, 5), 0)


def test_bisect_reports_non_convergence():
    res = bisect_to_level((1, 2), (1, 3), 1, F(2, 5), F(1, 10**12), max_iter=3)
    assert not res.converged
    assert res.iterations == 3


def test_float_search_single_runner():
    r = float_lonely_time_search([1.0], 1e-9, 1.0, 1e-4)
    assert r.time == pytest.approx(0.5)
    assert r.min_gap == pytest.approx(0.5)


def test_float_search_sqrt2():
    eps = 1e-3
    r = float_lonely_time_search([math.sqrt(2)], eps, 10.0)
    assert r is not None
    assert r.min_gap >= 0.5 - eps


@pytest.mark.parametrize("eps, step", [(1e-6, None), (1e-9, 1 / 3000)])
def test_float_search_matches_exact_engine(eps, step):
    r = float_lonely_time_search([1.0, 2.0], eps, 1.0, step)
    assert r.time == pytest.approx(1 / 3, abs=1e-6)
    assert r.min_gap == pytest.approx(1 / 3, abs=2 * eps)
    exact = gap_at_time((1, 2), F(r.time))
    assert exact >= F(1, 3) - F(2 * eps)


def test_float_search_nothing_found():
    assert float_lonely_time_search([1.0, 2.0], 1e-6, 0.2) is None


def test_float_search_rejects_bad_input():
    for args in [([0.0], 1e-3, 1.0), ([1.0], 0.0, 1.0), ([1.0], 1e-3, -1.0), ([], 1e-3, 1.0)]:
        with pytest.raises(ValueError):
            float_lonely_time_search(*args)
