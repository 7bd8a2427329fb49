import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import p2_box
from gue_extremes.distributions import (
    DomainError,
    EdgeSide,
    joint_cdf,
    expansion_predictor,
    marginal_max_cdf,
    marginal_min_cdf,
    marginal_min_reflected_cdf,
    marginal_table,
    pair_gap,
    parse_grid,
    tw_cdf,
    tw_cdf_pdf,
    tw_pdf,
    tw_pdf_fd,
    tw_table,
    unscaled_endpoints,
    _block_operator,
)
from gue_extremes.fredholm import det_block


# ----------------------------------------------------------- Tracy-Widom


def test_tw_far_right():
    assert abs(tw_cdf(8.0) - 1.0) < 1e-12


def test_tw_strictly_increasing():
    vals = [tw_cdf(t) for t in np.arange(-6.0, 4.01, 0.5)]
    assert np.all(np.diff(vals) > 0)


def test_tw_known_values():
    # reference values of F2 from independent high-precision tabulations
    assert tw_cdf(0.0) == pytest.approx(0.9693728283, abs=1e-9)
    assert tw_cdf(-2.0) == pytest.approx(0.4132241425, abs=1e-9)


def test_tw_range_error():
    with pytest.raises(DomainError):
        tw_cdf(-12.5)
    with pytest.raises(DomainError):
        tw_pdf(-13.0)


def test_tw_pdf_normalization():
    rule_t, rule_w = np.polynomial.legendre.leggauss(40)
    total = 0.0
    for a in np.arange(-10.0, 6.0, 1.0):
        t = a + 0.5 * (rule_t + 1)
        total += 0.5 * sum(w * tw_pdf(float(s)) for s, w in zip(t, rule_w))
    assert total == pytest.approx(1.0, abs=1e-8)


def test_tw_pdf_positive_and_vanishing():
    vals = np.array([tw_pdf(t) for t in np.arange(-8.0, 6.01, 0.5)])
    assert np.all(vals > 0)
    assert tw_pdf(-10.0) < 1e-10 and tw_pdf(7.0) < 1e-10


@pytest.mark.parametrize("t", np.arange(-6.0, 3.01, 0.5))
def test_tw_pdf_matches_finite_difference(t):
    assert abs(tw_pdf(t, 1e-12) - tw_pdf_fd(t)) < 1e-7


def test_tw_table_invariants():
    tab = tw_table(parse_grid("-10:6:0.05"))
    assert np.all(np.diff(tab.cdf) >= -1e-10)
    assert tab.cdf[0] < 1e-9 and abs(tab.cdf[-1] - 1) < 1e-9
    h = 0.05
    fd = (tab.cdf[2:] - tab.cdf[:-2]) / (2 * h)
    # O(h^2) agreement with the third derivative bounded by ~0.5
    assert np.max(np.abs(fd - tab.pdf[1:-1])) < 0.5 * h * h


# --------------------------------------------------------------- marginals


@pytest.mark.parametrize("t", np.arange(-4.0, 3.01, 0.5))
def test_marginal_paths_agree(t):
    a = marginal_min_reflected_cdf(10, t)
    b = marginal_max_cdf(10, t)
    assert abs(a - b) < 1e-10
    # public orientation is P(lam_min~ <= x) = 1 - P(-lam_min~ < -x)
    assert marginal_min_cdf(10, -t) == pytest.approx(1 - b, abs=1e-10)


def test_marginal_far_right():
    assert abs(marginal_max_cdf(20, 8.0) - 1) < 1e-9
    assert marginal_min_cdf(20, -8.0) < 1e-9


def test_marginal_tends_to_tw():
    grid = np.arange(-3.0, 2.01, 0.5)
    err = lambda n: max(abs(marginal_max_cdf(n, t) - tw_cdf(t)) for t in grid)
    ratio = err(16) / err(128)
    # O(n^{-2/3}) gives 8^{2/3} = 4
    assert 2.0 <= ratio <= 8.0


def test_marginal_n1_is_gaussian():
    # n=1: lam is N(0, 1/2); lam_max~ = sqrt(2)(lam - sqrt 2)
    from scipy.stats import norm

    for y in (-2.0, -0.5, 0.0, 1.0):
        lam = math.sqrt(2) + y / math.sqrt(2)
        assert marginal_max_cdf(1, y) == pytest.approx(norm.cdf(lam, scale=math.sqrt(0.5)), abs=1e-10)


def test_marginal_table_min_max():
    grid = parse_grid("-3:2:1")
    mx = marginal_table(12, grid, which="max")
    mn = marginal_table(12, -grid[::-1], which="min")
    np.testing.assert_allclose(mn.cdf, 1 - mx.cdf[::-1], atol=1e-10)
    assert mx.law == "MaxScaled(12)" and mn.law == "MinScaled(12)"
    with pytest.raises(ValueError):
        marginal_table(12, grid, which="mid")


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("-1:1:0.5"), [-1, -0.5, 0, 0.5, 1])
    with pytest.raises(ValueError):
        parse_grid("1:0:0.1")


# ------------------------------------------------------------------- joint


@pytest.mark.parametrize("x,y", [(0.0, 0.0), (1.0, -1.0), (-1.0, 1.0), (2.0, 0.5), (-2.0, -1.5)])
def test_joint_n2_brute_force(x, y):
    X, Y = unscaled_endpoints(2, x, y)
    v = joint_cdf(2, x, y)
    # P(min <= X, max <= Y) = P(max <= Y) - P(X < min, max <= Y)
    oracle = p2_box(-12.0, Y) - p2_box(X, Y)
    assert v.joint == pytest.approx(oracle, abs=1e-6)
    assert v.marginal_y == pytest.approx(p2_box(-12.0, Y), abs=1e-6)


def test_joint_domain_error():
    # n=2: X = -2 + c x, Y = 2 + c y; choose x, y so that X >= Y
    c = 2 ** -0.5 * 2 ** (-1 / 6)
    with pytest.raises(DomainError, match="X < Y"):
        joint_cdf(2, 3.0 / c, -2.0 / c)


def test_joint_large_separation():
    v = joint_cdf(50, 8.0, 8.0)
    assert abs(v.joint - 1) < 1e-8


@pytest.mark.parametrize("n", [4, 16, 50])
def test_joint_bounded_by_marginals(n):
    for x in (-2.0, 0.0, 1.5):
        for y in (-1.5, 0.0, 2.0):
            v = joint_cdf(n, x, y)
            assert v.joint <= min(v.marginal_x, v.marginal_y) + 1e-9
            for p in (v.joint, v.product, v.marginal_x, v.marginal_y):
                assert -1e-10 <= p <= 1 + 1e-10
            assert v.correction_predictor >= 0


def test_fast_pair_gap_equals_block_determinant():
    n, a, b, tol, m = 9, 0.5, -1.0, 1e-10, 32
    lower = EdgeSide.build(n, "1", a, tol, m)
    upper = EdgeSide.build(n, "2", b, tol, m)
    assert pair_gap(lower, upper) == pytest.approx(det_block(_block_operator(n, a, b, tol, m)), abs=1e-13)


@pytest.mark.parametrize("x,y", [(0.0, 0.0), (1.0, -1.0), (-1.0, 1.0)])
def test_correction_law(x, y):
    target = 0.25 * tw_pdf(-x) * tw_pdf(y)
    scaled = {n: joint_cdf(n, x, y).deviation * n ** (2 / 3) for n in (16, 64, 256)}
    resid = {n: abs(s - target) for n, s in scaled.items()}
    assert all(s > 0 for s in scaled.values())
    assert resid[256] < resid[64] < resid[16]
    for lo, hi in ((16, 64), (64, 256)):
        assert 2.0 <= resid[lo] / resid[hi] <= 8.0


def test_both_orientations():
    # P(-lam_min~ <= a, lam_max~ <= b) - F(a)F(b) ~ -1/4 F2'(a) F2'(b) n^{-2/3}
    n, a, b = 128, 0.0, 0.0
    lower = EdgeSide.build(n, "1", a, 1e-10, 48)
    upper = EdgeSide.build(n, "2", b, 1e-10, 48)
    reflected = (pair_gap(lower, upper) - lower.gap() * upper.gap()) * n ** (2 / 3)
    public = joint_cdf(n, -a, b).deviation * n ** (2 / 3)
    assert reflected == pytest.approx(-public, abs=1e-12)
    assert reflected == pytest.approx(-0.25 * tw_pdf(a) * tw_pdf(b), rel=0.1)


def test_independence_limit():
    grid = np.linspace(-2, 2, 5)
    C = {}
    for n in (16, 64, 256):
        sup = max(abs(joint_cdf(n, x, y).deviation) for x in grid for y in grid)
        C[n] = sup * n ** (2 / 3)
    assert max(C.values()) / min(C.values()) <= 2.0


# --------------------------------------------------------------- predictor


@settings(max_examples=25)
@given(st.floats(-4, 4), st.floats(-4, 4), st.integers(2, 10**6))
def test_predictor_exceeds_product(x, y, n):
    fx = tw_cdf(-x)
    fy = tw_cdf(y)
    assert expansion_predictor(n, x, y) - (1 - fx) * fy >= -1e-15


def test_predictor_limit():
    x, y = 0.5, -0.3
    base = (1 - tw_cdf(-x)) * tw_cdf(y)
    assert expansion_predictor(10**12, x, y) == pytest.approx(base, abs=1e-9)


def test_predictor_at_origin():
    p0 = tw_pdf(0.0)
    expected = 0.25 * p0 * p0 * 100 ** (-2 / 3)
    base = (1 - tw_cdf(0.0)) * tw_cdf(0.0)
    assert expansion_predictor(100, 0.0, 0.0) - base == pytest.approx(expected, rel=1e-12)
    assert joint_cdf(100, 0.0, 0.0).correction_predictor == pytest.approx(expected, rel=1e-10)


def test_tw_cdf_pdf_consistency():
    F, f = tw_cdf_pdf(-1.0)
    assert F == pytest.approx(tw_cdf(-1.0), abs=1e-12)
    assert f == pytest.approx(tw_pdf(-1.0), abs=1e-12)
