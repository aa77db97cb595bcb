"""Comparative statics of the optimal price gap and the Lambert W helper."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, OutOfRange, Singular
from .optimizer import gap_share
from .profit_model import TaxScenario, require_shifting, sgn

INV_E = math.exp(-1.0)


def _check_regular(s: TaxScenario) -> None:
    if s.tau1 == s.tau2:
        raise Singular("singular locus: tau1 == tau2")
    require_shifting(s)
    if s.tau_harmed == 0.0:
        raise Singular("singular locus: tau_i == 0")


def _gap(s: TaxScenario) -> float:
    return gap_share(s.abs_dtau, s.tau_harmed, s.prob_audit, s.z, s.gamma) * s.alp.width


def xi_constant(s: TaxScenario) -> float:
    """gamma (p_edge - p_mode) / (P(audit) (1+z) (1+1/gamma))**gamma."""
    g = s.gamma
    return g * s.alp.width / (s.prob_audit * (1 + s.z) * (1 + 1 / g)) ** g


def dp_dtau(s: TaxScenario) -> float:
    _check_regular(s)
    tau_i, d = s.tau_harmed, s.abs_dtau
    g = s.gamma
    return xi_constant(s) * (tau_i - d) / (tau_i ** (1 + g) * d ** (1 - g))


def semi2(s: TaxScenario) -> float:
    """Second-order tau_i semi-elasticity, d2p/dtau2 divided by dp/dtau."""
    _check_regular(s)
    tau_i, d, g = s.tau_harmed, s.abs_dtau, s.gamma
    return ((g - 1) * tau_i - (g + 1) * d) / (tau_i * d)


def d2p_dtau2(s: TaxScenario) -> float:
    return dp_dtau(s) * semi2(s)


def elasticity_tau(s: TaxScenario) -> float:
    """tau_i-elasticity of Delta p*: gamma (tau_i - |dtau|) / |dtau|."""
    _check_regular(s)
    return s.gamma * (s.tau_harmed - s.abs_dtau) / s.abs_dtau


def dp_dlambda(s: TaxScenario) -> float:
    _check_regular(s)
    return _gap(s) * (-s.gamma * math.exp(-s.lam) / s.prob_audit)


def dp_dz(s: TaxScenario) -> float:
    _check_regular(s)
    return _gap(s) * (-s.gamma / (1 + s.z))


def dp_dgamma(s: TaxScenario) -> float:
    _check_regular(s)
    bracket = s.abs_dtau / (s.prob_audit * (1 + s.z) * s.tau_harmed * (1 + 1 / s.gamma))
    return _gap(s) * (math.log(bracket) + 1 / (1 + s.gamma))


@dataclass(frozen=True)
class SensitivityReport:
    dp_dtau: float
    d2p_dtau2: float
    dp_dlambda: float
    dp_dz: float
    dp_dgamma: float
    elasticity_tau: float
    semi2: float


def sensitivity_report(s: TaxScenario) -> SensitivityReport:
    return SensitivityReport(
        dp_dtau=dp_dtau(s),
        d2p_dtau2=d2p_dtau2(s),
        dp_dlambda=dp_dlambda(s),
        dp_dz=dp_dz(s),
        dp_dgamma=dp_dgamma(s),
        elasticity_tau=elasticity_tau(s),
        semi2=semi2(s),
    )


def _gap_at(s: TaxScenario, param: str, value: float) -> float:
    """Closed-form gap with one parameter moved, bypassing scenario validation."""
    tau1, tau2 = s.tau1, s.tau2
    lam, z, g = s.lam, s.z, s.gamma
    harmed_is_1 = s.tau2 < s.tau1
    if param == "tau":
        if harmed_is_1:
            tau1 = value
        else:
            tau2 = value
    elif param == "lambda":
        lam = value
    elif param == "z":
        z = value
    elif param == "gamma":
        g = value
    else:
        raise DomainError(f"unknown parameter {param!r}")
    tau_i = tau1 if harmed_is_1 else tau2
    return gap_share(abs(tau2 - tau1), tau_i, -math.expm1(-lam), z, g) * s.alp.width


def _base_value(s: TaxScenario, param: str) -> float:
    return {"tau": s.tau_harmed, "lambda": s.lam, "z": s.z, "gamma": s.gamma}[param]


def finite_difference(s: TaxScenario, param: str, order: int = 1, h: Optional[float] = None) -> float:
    """Central difference of p* in ``param`` (tau means the harmed country's rate).

    Default steps scale with the parameter: 1e-6 for first order, 1e-4 for
    second order, times max(1, |theta|).
    """
    require_shifting(s)
    theta = _base_value(s, param)
    if h is None:
        h = (1e-6 if order == 1 else 1e-4) * max(1.0, abs(theta))
    if order == 1:
        return (_gap_at(s, param, theta + h) - _gap_at(s, param, theta - h)) / (2 * h)
    if order == 2:
        return (_gap_at(s, param, theta + h) - 2 * _gap_at(s, param, theta) + _gap_at(s, param, theta - h)) / (h * h)
    raise DomainError("only first and second order differences are supported")


def unit_elasticity_gamma(tau_i: float, abs_dtau: float) -> float:
    """Tolerance at which the tau_i-elasticity of the gap equals one."""
    if not tau_i > abs_dtau:
        raise OutOfRange(f"need tau_i > |dtau|, got {tau_i} <= {abs_dtau}")
    gamma = abs_dtau / (tau_i - abs_dtau)
    if not (0.0 < gamma <= 1.0):
        raise OutOfRange(f"unit-elasticity gamma {gamma} falls outside (0, 1]")
    return gamma


def lambert_w0(x: float) -> float:
    """Principal branch W0 on [-1/e, inf) by Halley iteration."""
    if x < -INV_E:
        if x < -INV_E - 1e-15:
            raise DomainError(f"W0 is undefined below -1/e, got {x}")
        x = -INV_E
    if x == 0.0:
        return 0.0
    if x == -INV_E:
        return -1.0
    if x < -0.25:
        # branch-point series in p = sqrt(2 (e x + 1))
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    elif x < 3.0:
        w = math.log1p(x) * 0.8
    else:
        lx = math.log(x)
        w = lx - math.log(lx)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= 1e-16 * (1.0 + abs(w)):
            break
    return w


def linearity_gamma(tau_i: float, abs_dtau: float) -> float:
    """gamma = W[tau_i |dtau| ln(|dtau|/tau_i)] / ln(|dtau|/tau_i).

    Equivalently the gamma solving gamma * (|dtau|/tau_i)**gamma = tau_i |dtau|.
    """
    denom = math.log(abs_dtau) - math.log(tau_i)
    if denom == 0.0:
        raise DomainError("tau_i == |dtau| makes the log ratio vanish")
    arg = tau_i * abs_dtau * denom
    if arg < -INV_E:
        raise DomainError(f"Lambert W argument {arg} < -1/e")
    return lambert_w0(arg) / denom


@dataclass(frozen=True)
class Limit:
    """A limiting value: finite (``value``) or divergent to sign * infinity."""

    value: Optional[float] = None
    sign: int = 0

    @property
    def divergent(self) -> bool:
        return self.value is None

    def as_float(self) -> float:
        return self.value if self.value is not None else self.sign * math.inf


@dataclass(frozen=True)
class TauLimits:
    tau_i_to_1: Limit
    tau_j_to_1: Limit
    tau_i_to_tau_j: Limit
    tau_i_to_tau_j_gamma_1: Limit
    triple: Limit
    gamma_to_0: Limit
    tau_i_to_0: Limit


def tau_limits(s: TaxScenario) -> TauLimits:
    """Boundary behaviour of dp*/dtau_i."""
    require_shifting(s)
    g = s.gamma
    xi = xi_constant(s)
    tau_i, tau_j = s.tau_harmed, s.tau_other
    width = s.alp.width
    direction = sgn(s.tau2 - s.tau1)
    penal = s.prob_audit * (1 + s.z)

    def finite_or_div(num: float, den: float) -> Limit:
        if den == 0.0:
            return Limit(sign=sgn(num))
        return Limit(num / den)

    at_i_1 = finite_or_div(xi * tau_j, abs(1 - tau_j) ** (1 - g))
    at_j_1 = finite_or_div(xi * (2 * tau_i - 1), tau_i ** (1 + g) * abs(tau_i - 1) ** (1 - g))
    special = Limit(width / (2 * tau_i * penal))
    close = special if g == 1.0 else Limit(sign=direction)
    return TauLimits(
        tau_i_to_1=at_i_1,
        tau_j_to_1=at_j_1,
        tau_i_to_tau_j=close,
        tau_i_to_tau_j_gamma_1=special,
        triple=Limit(width / (2 * penal)),
        gamma_to_0=Limit(0.0),
        tau_i_to_0=Limit(sign=-direction) if tau_j > 0 else Limit(0.0),
    )
