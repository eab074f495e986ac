import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from maxwell_bec.density import (
    bp_threshold,
    bp_threshold_point,
    de_fixed_point,
    epsilon_of_x,
    epsilon_slope_numerator,
    shannon_threshold,
    stability_threshold,
    three_valued_de,
)
from maxwell_bec.poly import DDPair, regular

from conftest import DOUBLE_JUMP, REG24, REG34, REG36, STCO, TABLE_ROWS, poly_from

ALL = [REG36, REG24, REG34, DOUBLE_JUMP, STCO]


def largest_root(pair, eps, grid=20000):
    """Independent oracle: scan f(x) = x - eps*lambda(y(x)) downward from 1."""
    f = lambda t: t - eps * pair.lambda_edge(pair.y(t))
    xs = np.linspace(1.0, 0.0, grid + 1)
    vals = f(xs)
    for k in range(grid):
        if vals[k] == 0.0:
            return xs[k]
        if vals[k] > 0 > vals[k + 1] or vals[k] < 0 < vals[k + 1]:
            return brentq(f, xs[k + 1], xs[k], xtol=1e-15)
    return 0.0


def test_fixed_point_paper_example():
    fp = de_fixed_point(REG36, 0.46)
    assert fp.x == pytest.approx(0.3789, abs=1e-4)
    assert fp.y == pytest.approx(0.9076, abs=1e-4)
    assert fp.x == pytest.approx(0.46 * fp.y**2, abs=1e-11)
    assert fp.y == pytest.approx(1 - (1 - fp.x) ** 5, abs=1e-12)


@pytest.mark.parametrize("pair", ALL)
def test_fixed_point_at_one(pair):
    fp = de_fixed_point(pair, 1.0)
    assert fp.x == 1.0 and fp.y == 1.0


def test_fixed_point_below_threshold():
    assert de_fixed_point(REG36, 0.40).x == 0.0


@pytest.mark.parametrize("pair", ALL)
@pytest.mark.parametrize("eps", [0.35, 0.45, 0.5, 0.55, 0.7, 0.9])
def test_fixed_point_matches_root_scan(pair, eps):
    if abs(eps - bp_threshold(pair)) < 1e-3:
        pytest.skip("too close to the threshold for a grid oracle")
    assert de_fixed_point(pair, eps).x == pytest.approx(largest_root(pair, eps), abs=1e-9)


def test_fixed_point_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        de_fixed_point(REG36, 1.5)


def bisect_threshold(pair, lo=0.0, hi=1.0, iters=26):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if de_fixed_point(pair, mid).x == 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize(
    "pair,expected,tol",
    [(REG36, 0.4294, 1e-3), (REG24, 1 / 3, 1e-12), (DOUBLE_JUMP, 0.48437, 1e-5), (STCO, 5 / 12, 1e-12)],
)
def test_bp_threshold_examples(pair, expected, tol):
    assert bp_threshold(pair) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize("pair", [REG36, DOUBLE_JUMP, REG34])
def test_bp_threshold_matches_de_bisection(pair):
    assert bp_threshold(pair) == pytest.approx(bisect_threshold(pair), abs=1e-6)


def test_stability_and_shannon():
    assert stability_threshold(STCO) == pytest.approx(1 / (0.4 * 6))
    assert math.isinf(stability_threshold(REG36))
    assert stability_threshold(REG24) == pytest.approx(1 / 3)
    assert shannon_threshold(REG36) == pytest.approx(0.5)
    assert shannon_threshold(REG34) == pytest.approx(0.75)
    row1 = DDPair(*TABLE_ROWS[0][:2])
    assert shannon_threshold(row1) == pytest.approx(0.3048, abs=1e-4)


def test_three_valued_reductions():
    s = three_valued_de(REG36, 0.46, 0.0)
    assert s.left[2] == 0.0 and s.right[2] == pytest.approx(0.0, abs=1e-15)
    assert s.left[1] == pytest.approx(de_fixed_point(REG36, 0.46).x, abs=1e-9)
    s = three_valued_de(REG36, 0.46, 1.0)
    assert s.left[1] == 0.0 and s.right[1] == 0.0
    s = three_valued_de(REG36, 0.46, 0.1)
    assert s.left[1] == pytest.approx(de_fixed_point(REG36, 0.46 * 0.9).x, abs=1e-9)
    assert s.left[1] + s.left[2] == pytest.approx(de_fixed_point(REG36, 0.46).x, abs=1e-9)
    for tri in (s.left, s.right):
        assert sum(tri) == pytest.approx(1.0, abs=1e-12)
        assert all(0.0 <= t <= 1.0 for t in tri)


@pytest.mark.parametrize("gamma", [0.05, 0.02, 0.3])
def test_three_valued_above_threshold_split(gamma):
    eps = 0.6
    s = three_valued_de(DOUBLE_JUMP, eps, gamma)
    assert s.left[1] == pytest.approx(de_fixed_point(DOUBLE_JUMP, eps * (1 - gamma)).x, abs=1e-9)
    assert s.left[1] + s.left[2] == pytest.approx(de_fixed_point(DOUBLE_JUMP, eps).x, abs=1e-9)


@pytest.mark.parametrize("pair", ALL)
def test_threshold_ordering_and_monotone_fixed_point(pair):
    eps_bp = bp_threshold(pair)
    assert eps_bp <= min(stability_threshold(pair), 1.0) + 1e-15
    xs = [de_fixed_point(pair, e).x for e in np.linspace(0.0, 1.0, 100)]
    assert all(b >= a for a, b in zip(xs, xs[1:]))
    for e in np.linspace(0.0, eps_bp - 1e-4, 10):
        assert de_fixed_point(pair, e).x < 1e-11


@pytest.mark.parametrize("l,r", [(3, 6), (4, 8), (3, 4), (5, 10), (6, 12), (3, 9)])
def test_regular_single_interior_minimum(l, r):
    pair = regular(l, r)
    xs = np.linspace(0, 1, 10001)[1:]
    s = np.sign(epsilon_slope_numerator(pair, xs))
    changes = np.count_nonzero(s[:-1] * s[1:] < 0)
    assert changes == 1


def test_epsilon_of_x_array_and_limit():
    xs = np.array([0.0, 0.5, 1.0])
    out = epsilon_of_x(STCO, xs)
    assert out[0] == pytest.approx(5 / 12)
    assert out[2] == pytest.approx(1.0)
    assert math.isinf(epsilon_of_x(REG36, 0.0))


@st.composite
def ensembles(draw):
    ld = draw(st.lists(st.integers(2, 9), min_size=1, max_size=3, unique=True))
    lw = draw(st.lists(st.floats(0.1, 1.0), min_size=len(ld), max_size=len(ld)))
    rd = draw(st.lists(st.integers(3, 12), min_size=1, max_size=2, unique=True))
    rw = draw(st.lists(st.floats(0.1, 1.0), min_size=len(rd), max_size=len(rd)))
    lam = poly_from({d - 1: w / sum(lw) for d, w in zip(ld, lw)})
    rho = poly_from({d - 1: w / sum(rw) for d, w in zip(rd, rw)})
    return DDPair(lam, rho)


@settings(max_examples=25, deadline=None)
@given(ensembles(), st.floats(0.05, 1.0))
def test_fixed_point_invariants(pair, eps):
    fp = de_fixed_point(pair, eps)
    assert 0.0 <= fp.x <= 1.0 and 0.0 <= fp.y <= 1.0
    if fp.x > 0:
        assert fp.x == pytest.approx(eps * pair.lambda_edge(fp.y), abs=1e-9)
        assert fp.y == pytest.approx(float(pair.y(fp.x)), abs=1e-12)
    e_bp, x_bp = bp_threshold_point(pair)
    assert e_bp <= stability_threshold(pair) + 1e-12
