"""Closed-form optimal transfer price, its regime, gains and the second stage in m."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, InfeasiblePenalty, NoRoot, NonConvexWarning, NotInEscapeRegime
from .profit_model import ShiftCase, TaxScenario, classify, expected_net_profit, require_shifting, sgn

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Regime(str, Enum):
    INTERIOR = "interior_alpha_cut"
    ESCAPED = "escaped"


@dataclass(frozen=True)
class Optimum:
    """Result of the price stage.

    In the escaped regime there is no finite maximiser: ``p_star``, ``delta_p``,
    ``alpha`` and ``gain`` are None and ``slope`` holds the constant crisp
    slope of the objective past the support edge.
    """

    regime: Regime
    share: float
    p_star: Optional[float] = None
    delta_p: Optional[float] = None
    alpha: Optional[float] = None
    gain: Optional[float] = None
    slope: Optional[float] = None

    @property
    def interior(self) -> bool:
        return self.regime is Regime.INTERIOR


def share_base(abs_dtau: float, tau_i: float, prob_audit: float, z: float, gamma: float) -> float:
    """|tau2 - tau1| / (P(audit) (1 + z) tau_i (1 + 1/gamma)), the bracket of the optimum."""
    denom = prob_audit * (1 + z) * tau_i * (1 + 1 / gamma)
    if denom == 0.0:
        return math.inf
    return abs_dtau / denom


def gap_share(abs_dtau: float, tau_i: float, prob_audit: float, z: float, gamma: float) -> float:
    """|Delta p*| / |p_edge - p_mode|; the optimum is an alpha-cut iff this is <= 1."""
    return share_base(abs_dtau, tau_i, prob_audit, z, gamma) ** gamma


def price_gap(s: TaxScenario) -> float:
    """Closed-form Delta p* = share * (p_edge - p_mode), evaluated even when it escapes."""
    require_shifting(s)
    return gap_share(s.abs_dtau, s.tau_harmed, s.prob_audit, s.z, s.gamma) * s.alp.width


def crisp_slope(s: TaxScenario, prob_audit: Optional[float] = None) -> float:
    """dE[Pi]/dp past the support edge, where the penalty weight is 1."""
    prob = s.prob_audit if prob_audit is None else prob_audit
    direction = sgn(s.tau2 - s.tau1)
    return (s.tau2 - s.tau1) * s.m - prob * (1 + s.z) * direction * s.tau_harmed * s.m


def margin_slope(s: TaxScenario) -> float:
    """dE[Pi]/dp at p = p_edge approached from inside the support."""
    direction = sgn(s.tau2 - s.tau1)
    return (s.tau2 - s.tau1) * s.m - s.prob_audit * (1 + s.z) * direction * s.tau_harmed * (1 + 1 / s.gamma) * s.m


def assemble_optimum(s: TaxScenario, share: float, gamma: float, prob_audit: float) -> Optimum:
    if share > 1.0:
        return Optimum(Regime.ESCAPED, share, slope=crisp_slope(s, prob_audit))
    delta_p = share * s.alp.width
    p_star = s.alp.p_mode + delta_p
    alp = s.alp if gamma == s.alp.gamma else s.alp.__class__(s.alp.side, s.alp.p_edge, s.alp.p_mode, gamma)
    gain = (s.tau2 - s.tau1) * delta_p * s.m / (1 + gamma)
    return Optimum(Regime.INTERIOR, share, p_star, delta_p, alp.membership(p_star), gain)


def optimal_price(s: TaxScenario) -> Optimum:
    require_shifting(s)
    share = gap_share(s.abs_dtau, s.tau_harmed, s.prob_audit, s.z, s.gamma)
    return assemble_optimum(s, share, s.gamma, s.prob_audit)


def lambda_threshold(abs_dtau: float, tau_i: float, z: float, gamma: float) -> float:
    """Smallest audit intensity keeping the optimum inside the support."""
    frac = abs_dtau / ((1 + z) * tau_i * (1 + 1 / gamma))
    if frac >= 1.0:
        raise InfeasiblePenalty(f"|dtau| / ((1+z) tau_i (1+1/gamma)) = {frac} >= 1: no lambda is large enough")
    return -math.log1p(-frac)


def audit_threshold(s: TaxScenario) -> float:
    require_shifting(s)
    return lambda_threshold(s.abs_dtau, s.tau_harmed, s.z, s.gamma)


@dataclass(frozen=True)
class EscapeEvidence:
    crisp_slope: float
    margin_slope: float
    direction: int
    monotone: bool
    probes: int


def detect_escape(s: TaxScenario, p_probe_grid: Optional[Sequence[float]] = None) -> EscapeEvidence:
    """Confirm the escaped regime: the crisp objective past p_edge rises without bound.

    The default probe grid holds 1000 prices stepping away from ``p_edge`` in
    the shifting direction (kept positive).
    """
    require_shifting(s)
    share = gap_share(s.abs_dtau, s.tau_harmed, s.prob_audit, s.z, s.gamma)
    if share < 1.0 - 1e-9:
        raise NotInEscapeRegime(f"share {share} < 1: the optimum is an interior alpha-cut")
    edge, width = s.alp.p_edge, s.alp.width
    if p_probe_grid is None:
        span = abs(width)
        if width < 0:
            span = min(span, 0.5 * edge)
        p_probe_grid = edge + math.copysign(1.0, width) * np.linspace(span / 1000, span, 1000)
    probes = np.asarray(p_probe_grid, dtype=float)
    values = np.array([expected_net_profit(s, float(p), crisp_outside=True) for p in probes])
    direction = sgn(s.tau2 - s.tau1)
    steps = np.diff(values) * np.sign(np.diff(probes)) * direction
    return EscapeEvidence(
        crisp_slope=crisp_slope(s),
        margin_slope=margin_slope(s),
        direction=direction,
        monotone=bool(np.all(steps > 0)),
        probes=len(probes),
    )


def shifting_gain(s: TaxScenario, opt: Optimum) -> float:
    """E[Pi(p*)] - E[Pi(p_mode)] = (tau2 - tau1) Delta p* m / (1 + gamma)."""
    if not opt.interior:
        raise DomainError("shifting gain is only defined for an interior optimum")
    return (s.tau2 - s.tau1) * opt.delta_p * s.m / (1 + s.gamma)


@dataclass(frozen=True)
class OutputChoice:
    m_star: float
    multiplier: float
    residual: float
    boundary: bool


def output_foc(s: TaxScenario, m: float, delta_p: float) -> float:
    """dE[Pi(p*, m)]/dm without the constraint term."""
    mc1 = s.div1.marginal_cost(s.div1.sales + m)
    mc2 = s.div2.marginal_cost(s.div2.sales - m)
    shift = (s.tau2 - s.tau1) * (s.alp.p_mode + delta_p / (1 + s.gamma))
    return -(1 - s.tau1) * mc1 + (1 - s.tau2) * mc2 + shift


def optimal_output(s: TaxScenario, opt: Optional[Optimum] = None, *, xtol: float = 1e-13) -> OutputChoice:
    """Second-stage intra-firm quantity m* on (0, s2] by bisection on the FOC.

    Marginal costs are taken at the divisions' actual outputs: C1' at s1 + m and
    C2' at s2 - m. When the FOC is still positive at m = s2 the constraint binds
    and the multiplier L = FOC(s2) >= 0 is returned.
    """
    s2 = s.div2.sales
    if not s2 > 0:
        raise DomainError("second stage needs positive division-2 sales")
    if classify(s).case is ShiftCase.NO_INCENTIVE:
        delta_p = 0.0
    else:
        opt = opt if opt is not None else optimal_price(s)
        if not opt.interior:
            raise DomainError("second stage needs an interior price optimum")
        delta_p = opt.delta_p

    for div, lo, hi in ((s.div1, s.div1.sales, s.div1.sales + s2), (s.div2, 0.0, s2)):
        if any(div.cost_curvature(x) < 0 for x in np.linspace(lo, hi, 11)):
            warnings.warn("cost function is not convex on the second-stage range", NonConvexWarning, stacklevel=2)

    top = output_foc(s, s2, delta_p)
    if top >= 0.0:
        return OutputChoice(s2, top, 0.0, True)
    lo, hi = 0.0, s2
    if output_foc(s, lo, delta_p) <= 0.0:
        raise NoRoot("FOC is non-positive on all of (0, s2]: no intra-firm transfer is optimal")
    while hi - lo > xtol * max(1.0, s2):
        mid = 0.5 * (lo + hi)
        if output_foc(s, mid, delta_p) > 0.0:
            lo = mid
        else:
            hi = mid
    m_star = 0.5 * (lo + hi)
    return OutputChoice(m_star, 0.0, output_foc(s, m_star, delta_p), False)


def _golden_max(fn: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def brute_force_optimal(objective: Callable[[float], float], lo: float, hi: float, n: int = 1000) -> tuple[float, float]:
    """Grid argmax on n points, refined by golden section on the winning bracket."""
    if n < 1000:
        raise DomainError(f"brute force needs n >= 1000, got {n}")
    grid = np.linspace(lo, hi, n)
    values = np.array([objective(float(x)) for x in grid])
    k = int(np.argmax(values))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, n - 1)]
    x, fx = _golden_max(objective, float(a), float(b), (hi - lo) * 1e-9)
    if values[k] > fx:
        return float(grid[k]), float(values[k])
    return x, fx
