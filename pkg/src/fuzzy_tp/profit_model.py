"""Divisional profits, shifting direction and the expected net profit objective."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

from .audit_model import prob_at_least_one
from .errors import DomainError, NegativeQuantity, NoIncentive, OutsideSupport, SideMismatch
from .fuzzy_core import ArmsLengthPrice, Side


def sgn(x: float) -> int:
    return int(x > 0) - int(x < 0)


@dataclass(frozen=True)
class LinearRevenue:
    a: float = 0.0

    def __call__(self, s: float) -> float:
        return self.a * s


@dataclass(frozen=True)
class QuadraticCost:
    """C(x) = b x + c x**2."""

    b: float = 0.0
    c: float = 0.0

    def __call__(self, x: float) -> float:
        return self.b * x + self.c * x * x

    def derivative(self, x: float) -> float:
        return self.b + 2.0 * self.c * x

    def second_derivative(self, x: float) -> float:
        return 2.0 * self.c


@dataclass(frozen=True)
class Division:
    """Revenue R(s), cost C(x) and own sales s of one division.

    Cost objects may expose ``derivative`` (and ``second_derivative``); plain
    callables fall back to central differences.
    """

    revenue: Callable[[float], float] = field(default_factory=LinearRevenue)
    cost: Callable[[float], float] = field(default_factory=QuadraticCost)
    sales: float = 0.0

    def marginal_cost(self, x: float) -> float:
        deriv = getattr(self.cost, "derivative", None)
        if deriv is not None:
            return deriv(x)
        h = 1e-6 * max(1.0, abs(x))
        return (self.cost(x + h) - self.cost(x - h)) / (2 * h)

    def cost_curvature(self, x: float) -> float:
        second = getattr(self.cost, "second_derivative", None)
        if second is not None:
            return second(x)
        h = 1e-4 * max(1.0, abs(x))
        return (self.marginal_cost(x + h) - self.marginal_cost(x - h)) / (2 * h)


def linear_quadratic(a: float = 0.0, b: float = 0.0, c: float = 0.0, sales: float = 0.0) -> Division:
    """Division with R(s) = a s and C(x) = b x + c x**2."""
    if c < 0:
        raise DomainError(f"quadratic cost coefficient must be >= 0, got {c}")
    return Division(LinearRevenue(a), QuadraticCost(b, c), sales)


class ShiftCase(str, Enum):
    LTP = "LTP"
    HTP = "HTP"
    NO_INCENTIVE = "NoIncentive"


@dataclass(frozen=True)
class ShiftDiagnosis:
    case: ShiftCase
    harmed_country: Optional[int]
    side: Optional[Side]


@dataclass(frozen=True)
class TaxScenario:
    tau1: float
    tau2: float
    z: float
    lam: float
    m: float
    alp: ArmsLengthPrice
    div1: Division = field(default_factory=Division)
    div2: Division = field(default_factory=Division)

    def __post_init__(self):
        for name in ("tau1", "tau2"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {value}")
        if not (self.z > 0 and math.isfinite(self.z)):
            raise DomainError(f"penalty rate z must be positive and finite, got {self.z}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"audit intensity lambda must be positive and finite, got {self.lam}")
        if not self.m > 0:
            raise DomainError(f"intra-firm quantity m must be positive, got {self.m}")

    @property
    def diagnosis(self) -> ShiftDiagnosis:
        return classify(self)

    @property
    def tau_harmed(self) -> float:
        return self.tau1 if self.tau2 < self.tau1 else self.tau2

    @property
    def tau_other(self) -> float:
        return self.tau2 if self.tau2 < self.tau1 else self.tau1

    @property
    def abs_dtau(self) -> float:
        return abs(self.tau2 - self.tau1)

    @property
    def gamma(self) -> float:
        return self.alp.gamma

    @property
    def prob_audit(self) -> float:
        return prob_at_least_one(self.lam)

    def replace(self, **changes) -> TaxScenario:
        return replace(self, **changes)


def classify(s: TaxScenario) -> ShiftDiagnosis:
    if s.tau2 < s.tau1:
        return ShiftDiagnosis(ShiftCase.LTP, 1, Side.LOWER)
    if s.tau2 > s.tau1:
        return ShiftDiagnosis(ShiftCase.HTP, 2, Side.UPPER)
    return ShiftDiagnosis(ShiftCase.NO_INCENTIVE, None, None)


def require_shifting(s: TaxScenario) -> ShiftDiagnosis:
    """Diagnosis of a scenario that must have an incentive and a matching side."""
    diag = classify(s)
    if diag.case is ShiftCase.NO_INCENTIVE:
        raise NoIncentive(f"tau1 == tau2 == {s.tau1}: no profit-shifting incentive")
    if s.alp.side is not diag.side:
        raise SideMismatch(f"{diag.case.value} is assessed on the {diag.side.value} side, scenario has {s.alp.side.value}")
    return diag


def pretax_profits(s: TaxScenario, p: float) -> tuple[float, float]:
    if not p > 0:
        raise DomainError(f"transfer price must be positive, got {p}")
    if s.div2.sales - s.m < 0:
        raise NegativeQuantity(f"s2 - m = {s.div2.sales - s.m} < 0")
    pi1 = s.div1.revenue(s.div1.sales) - s.div1.cost(s.div1.sales + s.m) + p * s.m
    pi2 = s.div2.revenue(s.div2.sales) - s.div2.cost(s.div2.sales - s.m) - p * s.m
    return pi1, pi2


def global_net_profit(s: TaxScenario, p: float) -> float:
    pi1, pi2 = pretax_profits(s, p)
    return (1 - s.tau1) * pi1 + (1 - s.tau2) * pi2


def expected_penalty(s: TaxScenario, p: float, *, crisp_outside: bool = False) -> float:
    """Expected fuzzy tax penalty at transfer price ``p``.

    Inside the interval of interest the evaded-tax base is weighted by
    ((p - p_mode) / (p_edge - p_mode)) ** (1 / gamma). On the mode side the
    penalty is zero. Past ``p_edge`` the weight would exceed one: that raises
    OutsideSupport unless ``crisp_outside`` asks for the crisp (weight 1) form.
    """
    diag = require_shifting(s)
    gap = p - s.alp.p_mode
    u = gap / s.alp.width
    if u <= 0.0:
        return 0.0
    if u > 1.0:
        if not crisp_outside:
            raise OutsideSupport(f"p={p} lies beyond the support edge {s.alp.p_edge}")
        weight = 1.0
    else:
        weight = u ** (1.0 / s.gamma)
    direction = sgn(s.tau2 - s.tau1)
    tau_i = s.tau1 if diag.harmed_country == 1 else s.tau2
    return s.prob_audit * (1 + s.z) * direction * tau_i * gap * weight * s.m


def expected_net_profit(s: TaxScenario, p: float, *, crisp_outside: bool = False) -> float:
    return global_net_profit(s, p) - expected_penalty(s, p, crisp_outside=crisp_outside)
