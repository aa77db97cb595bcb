"""Poisson audit probabilities, homogeneous and enforcement-indexed."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from .errors import DivergentIntegral, DomainError, InvalidArgs, InvalidLambda

# Quadrature stand-in for the open lower limit 0+.
LOWER_LIMIT = 1e-12
LOG_SPACE_K = 20


def _check_lambda(lam: float) -> None:
    if not (lam > 0 and math.isfinite(lam)):
        raise InvalidLambda(f"audit intensity must be positive and finite, got {lam}")


@dataclass(frozen=True)
class AuditIntensity:
    """Audits per limitation period in the harmed country."""

    lam: float

    def __post_init__(self):
        _check_lambda(self.lam)

    @property
    def prob_audit(self) -> float:
        return prob_at_least_one(self.lam)


def poisson_pmf(k: int, lam: float) -> float:
    _check_lambda(lam)
    if k < 0:
        raise InvalidArgs(f"k must be non-negative, got {k}")
    if k > LOG_SPACE_K:
        return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))
    return lam**k * math.exp(-lam) / math.factorial(k)


def poisson_cdf(k: int, lam: float) -> float:
    """P(0 <= q <= k) as the explicit sum of pmf terms."""
    _check_lambda(lam)
    if k < 0:
        raise InvalidArgs(f"k must be non-negative, got {k}")
    return math.fsum(poisson_pmf(q, lam) for q in range(k + 1))


def regularized_upper_gamma(a: int, lam: float) -> float:
    """Gamma(a, lam) / Gamma(a) for integer a >= 1 via the finite series.

    Gamma(a, lam) = (a-1)! e^-lam sum_{q<a} lam^q / q!, so the (a-1)! cancels and
    the terms are built by the recurrence term_q = term_{q-1} * lam / q.
    """
    if isinstance(a, bool) or int(a) != a or a < 1:
        raise InvalidArgs(f"a must be an integer >= 1, got {a}")
    _check_lambda(lam)
    term = 1.0
    terms = [term]
    for q in range(1, int(a)):
        term *= lam / q
        terms.append(term)
    return math.exp(-lam) * math.fsum(terms)


def prob_at_least_one(lam: float) -> float:
    """1 - e^-lam, the chance that at least one audit happens."""
    _check_lambda(lam)
    return -math.expm1(-lam)


def cumulative_intensity(rate: Callable[[float], float], gamma_dot: float, *, epsabs: float = 1e-10) -> float:
    """Integral of ``rate`` from 0+ to ``gamma_dot`` by adaptive quadrature."""
    if not (0.0 < gamma_dot <= 1.0):
        raise DomainError(f"gamma_dot must lie in (0, 1], got {gamma_dot}")
    if gamma_dot <= LOWER_LIMIT:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(rate, LOWER_LIMIT, gamma_dot, epsabs=epsabs, epsrel=1e-12, limit=200)
        except (integrate.IntegrationWarning, ZeroDivisionError, OverflowError) as exc:
            raise DivergentIntegral(f"cumulative intensity did not converge up to {gamma_dot}: {exc}") from exc
    if not math.isfinite(value):
        raise DivergentIntegral(f"cumulative intensity is infinite at {gamma_dot}")
    return value


def semi_elasticity_rate(f: Callable[[float], float], df: Callable[[float], float]) -> Callable[[float], float]:
    """Rate f'(y) / (1 - f(y)); its cumulative intensity is -ln(1 - f)."""

    def rate(y: float) -> float:
        return df(y) / (1.0 - f(y))

    return rate


def prob_audit_enforcement(f: Callable[[float], float], gamma_dot: float) -> float:
    if not (0.0 < gamma_dot <= 1.0):
        raise DomainError(f"gamma_dot must lie in (0, 1], got {gamma_dot}")
    return float(f(gamma_dot))
