import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special, stats

from fuzzy_tp.audit_model import (
    AuditIntensity,
    cumulative_intensity,
    poisson_cdf,
    poisson_pmf,
    prob_at_least_one,
    prob_audit_enforcement,
    regularized_upper_gamma,
    semi_elasticity_rate,
)
from fuzzy_tp.errors import DivergentIntegral, DomainError, InvalidArgs, InvalidLambda


def test_pmf_examples():
    assert poisson_pmf(0, 1.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert poisson_pmf(2, 2.0) == pytest.approx(2 * math.exp(-2), abs=1e-15)
    assert math.fsum(poisson_pmf(k, 5.0) for k in range(201)) == pytest.approx(1.0, abs=1e-12)


def test_pmf_log_space_matches_scipy():
    for k in (21, 50, 150):
        assert poisson_pmf(k, 30.0) == pytest.approx(stats.poisson.pmf(k, 30.0), rel=1e-12)


def test_cdf_examples():
    assert poisson_cdf(0, 1.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert poisson_cdf(3, 2.0) == pytest.approx(0.857123460498547, abs=1e-12)
    assert poisson_cdf(200, 5.0) == pytest.approx(1.0, abs=1e-12)


def test_regularized_upper_gamma_examples():
    for lam in (0.1, 1.0, 7.0):
        assert regularized_upper_gamma(1, lam) == pytest.approx(math.exp(-lam), rel=1e-15)
    assert regularized_upper_gamma(4, 2.0) == pytest.approx(poisson_cdf(3, 2.0), abs=1e-15)
    # scipy oracle: gammaincc(6, 0.5)
    assert regularized_upper_gamma(6, 0.5) == pytest.approx(0.9999858350626777, abs=1e-12)
    assert regularized_upper_gamma(6, 0.5) == pytest.approx(special.gammaincc(6, 0.5), abs=1e-14)


@pytest.mark.parametrize("lam", [0.1, 1.0, 5.0, 20.0])
def test_cdf_equals_gamma_series(lam):
    for k in range(51):
        assert abs(poisson_cdf(k, lam) - regularized_upper_gamma(k + 1, lam)) <= 1e-12
        assert abs(poisson_cdf(k, lam) - special.gammaincc(k + 1, lam)) <= 1e-12


def test_prob_at_least_one():
    assert prob_at_least_one(math.log(2)) == pytest.approx(0.5, abs=1e-15)
    assert prob_at_least_one(1.0) == pytest.approx(0.632121, abs=1e-6)
    assert 0 < prob_at_least_one(1e-12) < 1e-11
    for lam in (0.01, 0.3, 2.0, 9.0):
        assert abs(prob_at_least_one(lam) - (1 - poisson_cdf(0, lam))) <= 1e-15
    assert AuditIntensity(1.0).prob_audit == prob_at_least_one(1.0)


@settings(max_examples=200, deadline=None)
@given(a=st.floats(1e-3, 30), b=st.floats(1e-3, 30), k=st.integers(0, 30))
def test_monotonicity(a, b, k):
    lo, hi = sorted((a, b))
    assert prob_at_least_one(lo) <= prob_at_least_one(hi)
    assert poisson_cdf(k, lo) >= poisson_cdf(k, hi) - 1e-15


def test_errors():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidLambda):
            prob_at_least_one(bad)
    with pytest.raises(InvalidLambda):
        AuditIntensity(0.0)
    with pytest.raises(InvalidArgs):
        poisson_pmf(-1, 1.0)
    with pytest.raises(InvalidArgs):
        regularized_upper_gamma(0, 1.0)
    with pytest.raises(InvalidArgs):
        regularized_upper_gamma(2.5, 1.0)
    with pytest.raises(DomainError):
        cumulative_intensity(lambda y: 1.0, 1.5)


def test_cumulative_intensity_examples():
    assert cumulative_intensity(lambda y: 3.0, 0.5) == pytest.approx(1.5, abs=1e-10)
    rate = semi_elasticity_rate(lambda y: y, lambda y: 1.0)
    assert cumulative_intensity(rate, 0.5) == pytest.approx(-math.log(0.5), abs=1e-9)
    rate2 = semi_elasticity_rate(lambda y: y * y, lambda y: 2 * y)
    assert cumulative_intensity(rate2, 0.9) == pytest.approx(1.66073, abs=1e-5)
    assert cumulative_intensity(rate2, 0.9) == pytest.approx(-math.log(0.19), abs=1e-9)


def test_divergent_intensity_is_reported():
    rate = semi_elasticity_rate(lambda y: y, lambda y: 1.0)
    with pytest.raises(DivergentIntegral):
        cumulative_intensity(rate, 1.0)


PROFILES = {
    "identity": (lambda y: y, lambda y: 1.0),
    "square": (lambda y: y * y, lambda y: 2 * y),
    "sqrt": (lambda y: math.sqrt(y), lambda y: 0.5 / math.sqrt(y)),
    "smoothstep": (lambda y: y * y * (3 - 2 * y), lambda y: 6 * y * (1 - y)),
}


@pytest.mark.parametrize("name", sorted(PROFILES))
def test_semi_elasticity_identity(name):
    f, df = PROFILES[name]
    rate = semi_elasticity_rate(f, df)
    for y in np.round(np.arange(0.1, 0.95, 0.1), 10):
        big_lambda = cumulative_intensity(rate, float(y))
        assert abs(-math.expm1(-big_lambda) - f(float(y))) <= 1e-8


def test_prob_audit_enforcement():
    assert prob_audit_enforcement(lambda y: y, 0.3) == 0.3
    sq = PROFILES["square"]
    assert prob_audit_enforcement(sq[0], 0.5) == 0.25
    big_lambda = cumulative_intensity(semi_elasticity_rate(*sq), 0.5)
    assert -math.expm1(-big_lambda) == pytest.approx(0.25, abs=1e-8)
    assert prob_audit_enforcement(lambda y: y, 1.0 - 1e-12) < 1.0
    with pytest.raises(DomainError):
        prob_audit_enforcement(lambda y: y, 0.0)
