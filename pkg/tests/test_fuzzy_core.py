import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzy_tp.errors import DegenerateRange, DomainError, EmptyCut, IncompatibleModes, InvalidGamma
from fuzzy_tp.fuzzy_core import (
    ArmsLengthPrice,
    FuzzyNumber,
    PowerShape,
    Side,
    alpha_cut,
    intersect,
    inverse_membership,
    make_arms_length,
    membership,
    reconstruct_membership,
)

LTP_ALP = ArmsLengthPrice(Side.LOWER, 80.0, 100.0, 0.5)
HTP_ALP = ArmsLengthPrice(Side.UPPER, 120.0, 100.0, 0.5)


def test_triangle_membership_and_cut():
    tri = FuzzyNumber.triangle(1.0, 2.0, 4.0)
    assert membership(tri, 2.0) == 1.0
    assert membership(tri, 1.5) == pytest.approx(0.5)
    assert membership(tri, 3.0) == pytest.approx(0.5)
    assert membership(tri, 0.0) == 0.0
    assert alpha_cut(tri, 0.5) == pytest.approx((1.5, 3.0))
    assert alpha_cut(tri, 1.0) == pytest.approx((2.0, 2.0))


def test_trapezoid_core_is_flat():
    trap = FuzzyNumber.trapezoid(0.0, 1.0, 3.0, 4.0)
    for x in (1.0, 2.0, 3.0):
        assert trap.membership(x) == 1.0


def test_cut_errors():
    tri = FuzzyNumber.triangle(1.0, 2.0, 4.0)
    with pytest.raises(EmptyCut):
        tri.alpha_cut(1.5)
    with pytest.raises(DomainError):
        tri.alpha_cut(0.0)


def test_bad_knots_and_shapes():
    with pytest.raises(DomainError):
        FuzzyNumber(2.0, 1.0, 3.0, 4.0)
    with pytest.raises(InvalidGamma):
        PowerShape(0.0)


def test_power_shape_on_ltp_side():
    # half-way between edge and mode with gamma = 0.5 grades sqrt(0.5)
    assert LTP_ALP.membership(90.0) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert LTP_ALP.membership(100.0) == 1.0
    assert LTP_ALP.membership(105.0) == 1.0  # mode side saturates
    assert LTP_ALP.membership(80.0) == 0.0
    assert LTP_ALP.membership(70.0) == 0.0


def test_htp_mirror():
    for x in np.linspace(100, 120, 11):
        assert HTP_ALP.membership(x) == pytest.approx(LTP_ALP.membership(200 - x), abs=1e-12)


def test_fixture_alpha_at_optimum():
    # oracle: mu(p*) for p* = 92.23689628374657
    assert LTP_ALP.membership(92.23689628374657) == pytest.approx(0.7822050972649877, abs=1e-12)


def test_inverse_membership_examples():
    assert inverse_membership(LTP_ALP, 1.0) == pytest.approx(100.0)
    assert inverse_membership(LTP_ALP, 0.5) == pytest.approx(80 + 0.25 * 20)
    assert inverse_membership(HTP_ALP, 0.5) == pytest.approx(120 - 0.25 * 20)


def test_arms_length_validation():
    with pytest.raises(DegenerateRange):
        make_arms_length("lower", 100.0, 100.0, 0.5)
    with pytest.raises(DomainError):
        make_arms_length("lower", 120.0, 100.0, 0.5)
    with pytest.raises(InvalidGamma):
        make_arms_length("upper", 120.0, 100.0, 1.5)
    with pytest.raises(InvalidGamma):
        make_arms_length("upper", 120.0, 100.0, 0.0)


def test_one_sided_fuzzy_number():
    fn = LTP_ALP.to_fuzzy_number()
    assert fn.membership(1e9) == 1.0
    assert fn.membership(90.0) == pytest.approx(LTP_ALP.membership(90.0))
    lo, hi = fn.alpha_cut(0.5)
    assert lo == pytest.approx(LTP_ALP.inverse_membership(0.5))
    assert hi == math.inf


def test_intersect_builds_two_sided_number():
    fn = intersect(LTP_ALP, HTP_ALP)
    assert fn.membership(100.0) == 1.0
    assert fn.membership(90.0) == pytest.approx(LTP_ALP.membership(90.0))
    assert fn.membership(110.0) == pytest.approx(HTP_ALP.membership(110.0))
    with pytest.raises(IncompatibleModes):
        intersect(LTP_ALP, ArmsLengthPrice(Side.UPPER, 120.0, 90.0, 0.5))


gammas = st.floats(0.05, 1.0)
alphas = st.floats(1e-6, 1.0)


@settings(max_examples=300, deadline=None)
@given(gamma=st.floats(0.5, 1.0), alpha=st.floats(1e-4, 1.0), side=st.sampled_from(["lower", "upper"]))
def test_round_trip_well_conditioned(gamma, alpha, side):
    alp = make_arms_length(side, 80.0 if side == "lower" else 120.0, 100.0, gamma)
    assert alp.membership(alp.inverse_membership(alpha)) == pytest.approx(alpha, abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(gamma=st.floats(1e-3, 1.0), alpha=st.floats(1e-6, 1.0))
def test_round_trip_error_is_price_rounding(gamma, alpha):
    # The only loss is rounding p to a double: |d alpha| <= gamma * alpha**(1 - 1/gamma) * ulp(p) / width.
    alp = make_arms_length("lower", 80.0, 100.0, gamma)
    p = alp.inverse_membership(alpha)
    back = alp.membership(p)
    if back == 0.0:
        # alpha**(1/gamma) * width fell below one ulp of p_edge
        assert alpha ** (1 / gamma) * 20.0 <= math.ulp(80.0)
    else:
        bound = gamma * max(alpha, back) ** (1 - 1 / gamma) * math.ulp(p) / 20.0
        assert abs(back - alpha) <= 2 * bound + 1e-15


@settings(max_examples=300, deadline=None)
@given(gamma=gammas, a=alphas, b=alphas)
def test_alpha_cuts_are_nested(gamma, a, b):
    fn = intersect(make_arms_length("lower", 80.0, 100.0, gamma), make_arms_length("upper", 130.0, 100.0, gamma))
    lo, hi = sorted((a, b))
    outer, inner = fn.alpha_cut(lo), fn.alpha_cut(hi)
    assert outer[0] <= inner[0] + 1e-12 and inner[1] <= outer[1] + 1e-12


@settings(max_examples=100, deadline=None)
@given(x=st.floats(70.0, 140.0), gamma=gammas)
def test_representation_theorem(x, gamma):
    fn = intersect(make_arms_length("lower", 80.0, 100.0, gamma), make_arms_length("upper", 130.0, 100.0, gamma))
    n = 400
    assert abs(reconstruct_membership(fn, x, n) - fn.membership(x)) <= 1.0 / (n - 1) + 1e-12


def test_general_shape_without_inverse_uses_bisection():
    fn = FuzzyNumber(0.0, 1.0, 1.0, 2.0, lower_shape=lambda t: t * t, upper_shape=lambda t: t)
    lo, hi = fn.alpha_cut(0.25)
    assert lo == pytest.approx(0.5, abs=1e-10)
    assert hi == pytest.approx(1.75, abs=1e-10)


def test_trapezoid_cuts():
    trap = FuzzyNumber.trapezoid(0.0, 1.0, 2.0, 3.0)
    assert trap.alpha_cut(1.0) == pytest.approx((1.0, 2.0))
    assert trap.alpha_cut(0.5) == pytest.approx((0.5, 2.5))


def test_reconstruction_examples():
    trap = FuzzyNumber.trapezoid(0.0, 1.0, 2.0, 3.0)
    assert reconstruct_membership(trap, 1.5, 101) == 1.0
    assert reconstruct_membership(trap, 0.5, 1001) == pytest.approx(0.5, abs=1e-3)
    assert reconstruct_membership(trap, 5.0, 11) == 0.0


def test_reconstruction_on_dense_grid():
    trap = FuzzyNumber.trapezoid(0.0, 1.0, 2.0, 3.0)
    n = 257
    xs = np.linspace(-0.5, 3.5, 1000)
    worst = max(abs(reconstruct_membership(trap, float(x), n) - trap.membership(float(x))) for x in xs)
    assert worst <= 1.0 / (n - 1)


def test_power_shape_hand_values():
    assert LTP_ALP.membership(95.0) == pytest.approx(math.sqrt(0.75), abs=1e-12)
    assert LTP_ALP.inverse_membership(0.25) == pytest.approx(81.25, abs=1e-12)
    assert LTP_ALP.inverse_membership(0.0) == pytest.approx(80.0)


def test_intersect_linear_ramps_is_trapezoid():
    fn = intersect(make_arms_length("lower", 80, 100, 1.0), make_arms_length("upper", 130, 110, 1.0))
    trap = FuzzyNumber.trapezoid(80, 100, 110, 130)
    xs = np.linspace(70, 140, 10_000)
    assert max(abs(fn.membership(float(x)) - trap.membership(float(x))) for x in xs) < 1e-12


@settings(max_examples=200, deadline=None)
@given(x=st.floats(60, 150), gamma=gammas)
def test_intersect_is_pointwise_min(x, gamma):
    lo, hi = make_arms_length("lower", 80, 100, gamma), make_arms_length("upper", 130, 110, gamma)
    assert intersect(lo, hi).membership(x) == pytest.approx(min(lo.membership(x), hi.membership(x)), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(p1=st.floats(80, 100), p2=st.floats(80, 100), gamma=gammas)
def test_lower_side_monotone(p1, p2, gamma):
    alp = make_arms_length("lower", 80, 100, gamma)
    a, b = sorted((p1, p2))
    assert alp.membership(a) <= alp.membership(b)


@settings(max_examples=200, deadline=None)
@given(x1=st.floats(60, 150), x2=st.floats(60, 150), w=st.floats(0, 1), gamma=gammas)
def test_quasi_concave(x1, x2, w, gamma):
    fn = intersect(make_arms_length("lower", 80, 100, gamma), make_arms_length("upper", 130, 110, gamma))
    mid = w * x1 + (1 - w) * x2
    assert fn.membership(mid) >= min(fn.membership(x1), fn.membership(x2)) - 1e-12
