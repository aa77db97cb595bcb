"""Joint enforcement parametrisation: tolerance g(y) and audit probability f(y)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, InvalidGamma
from .fuzzy_core import ArmsLengthPrice
from .optimizer import Optimum, Regime, assemble_optimum, gap_share, lambda_threshold
from .profit_model import TaxScenario, require_shifting

GAMMA_DOT_MIN = 1e-6


@dataclass(frozen=True)
class ProfileMap:
    """A monotone map (0, 1] -> (0, 1] together with its exact derivative."""

    name: str
    fn: Callable[[float], float] = field(repr=False, compare=False)
    dfn: Callable[[float], float] = field(repr=False, compare=False)
    params: dict = field(default_factory=dict)

    def __call__(self, y: float) -> float:
        return self.fn(y)

    def derivative(self, y: float) -> float:
        return self.dfn(y)


def identity() -> ProfileMap:
    return ProfileMap("identity", lambda y: y, lambda y: 1.0)


def power(k: float) -> ProfileMap:
    if not k > 0:
        raise DomainError(f"power exponent must be positive, got {k}")
    return ProfileMap("power", lambda y: y**k, lambda y: k * y ** (k - 1), {"k": k})


def smoothstep() -> ProfileMap:
    return ProfileMap("smoothstep", lambda y: y * y * (3 - 2 * y), lambda y: 6 * y * (1 - y))


def logistic(steepness: float = 10.0, midpoint: float = 0.5) -> ProfileMap:
    """Logistic curve rescaled so that it maps 0 -> 0 and 1 -> 1."""
    if not steepness > 0:
        raise DomainError(f"steepness must be positive, got {steepness}")

    def sig(y):
        return 1.0 / (1.0 + math.exp(-steepness * (y - midpoint)))

    lo, hi = sig(0.0), sig(1.0)

    def fn(y):
        return (sig(y) - lo) / (hi - lo)

    def dfn(y):
        sy = sig(y)
        return steepness * sy * (1 - sy) / (hi - lo)

    return ProfileMap("logistic", fn, dfn, {"steepness": steepness, "midpoint": midpoint})


def tolerance_ratio(g: ProfileMap, delta: float = 0.0, floor: float = 1e-12) -> ProfileMap:
    """f(y) = g/(1+g) + delta, clamped to [floor, 1]: the critical locus shifted by delta."""

    def raw(y):
        gy = g(y)
        return gy / (1 + gy) + delta

    def fn(y):
        return min(max(raw(y), floor), 1.0)

    def dfn(y):
        r = raw(y)
        if r <= floor or r >= 1.0:
            return 0.0
        return g.derivative(y) / (1 + g(y)) ** 2

    return ProfileMap("tolerance_ratio", fn, dfn, {"delta": delta, "floor": floor})


REGISTRY = {
    "identity": identity,
    "power": power,
    "smoothstep": smoothstep,
    "logistic": logistic,
}


def make_map(name: str, params: Optional[dict] = None, *, g: Optional[ProfileMap] = None) -> ProfileMap:
    params = dict(params or {})
    if name == "tolerance_ratio":
        if g is None:
            raise DomainError("tolerance_ratio is defined relative to g and cannot be used for g itself")
        return tolerance_ratio(g, **params)
    try:
        factory = REGISTRY[name]
    except KeyError:
        valid = ", ".join(sorted([*REGISTRY, "tolerance_ratio"]))
        raise DomainError(f"unknown profile map {name!r}; valid: {valid}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name!r}: {exc}") from None


@dataclass(frozen=True)
class EnforcementProfile:
    g: ProfileMap
    f: ProfileMap

    def boundary_values(self) -> dict:
        y0 = GAMMA_DOT_MIN
        return {"g_low": self.g(y0), "f_low": self.f(y0), "g_high": self.g(1.0), "f_high": self.f(1.0)}


def build_profile(g_spec: dict, f_spec: dict) -> EnforcementProfile:
    g = make_map(g_spec["name"], g_spec.get("params"))
    f = make_map(f_spec["name"], f_spec.get("params"), g=g)
    return EnforcementProfile(g, f)


def _clip(gamma_dot: float) -> float:
    if not (0.0 < gamma_dot <= 1.0):
        raise DomainError(f"gamma_dot must lie in (0, 1], got {gamma_dot}")
    return max(gamma_dot, GAMMA_DOT_MIN)


def gamma_dot_grid(grid: Union[int, Sequence[float]]) -> np.ndarray:
    if isinstance(grid, (int, np.integer)):
        if grid < 2:
            raise DomainError("grid needs at least two points")
        return np.linspace(GAMMA_DOT_MIN, 1.0, int(grid))
    return np.asarray(grid, dtype=float)


def _tolerance(prof: EnforcementProfile, y: float) -> float:
    g = prof.g(y)
    if not (0.0 < g <= 1.0):
        raise InvalidGamma(f"g({y}) = {g} is outside (0, 1]")
    return g


def enforcement_share(base: TaxScenario, prof: EnforcementProfile, gamma_dot: float) -> float:
    y = _clip(gamma_dot)
    return gap_share(base.abs_dtau, base.tau_harmed, prof.f(y), base.z, _tolerance(prof, y))


def p_star_enforcement(base: TaxScenario, prof: EnforcementProfile, gamma_dot: float) -> Optimum:
    """Optimum with gamma -> g(gamma_dot) and 1 - e^-lambda -> f(gamma_dot)."""
    require_shifting(base)
    y = _clip(gamma_dot)
    g = _tolerance(prof, y)
    share = gap_share(base.abs_dtau, base.tau_harmed, prof.f(y), base.z, g)
    return assemble_optimum(base, share, g, prof.f(y))


def enforcement_bracket(base: TaxScenario, prof: EnforcementProfile, gamma_dot: float) -> float:
    """g'(ln share_base + 1/(1+g)) - f' g / f, the factor multiplying Delta p*."""
    require_shifting(base)
    y = _clip(gamma_dot)
    g, f = _tolerance(prof, y), prof.f(y)
    bracket = base.abs_dtau / (f * (1 + base.z) * base.tau_harmed * (1 + 1 / g))
    return prof.g.derivative(y) * (math.log(bracket) + 1 / (1 + g)) - prof.f.derivative(y) * g / f


def dp_ddotgamma(base: TaxScenario, prof: EnforcementProfile, gamma_dot: float) -> float:
    y = _clip(gamma_dot)
    share = enforcement_share(base, prof, y)
    return share * base.alp.width * enforcement_bracket(base, prof, y)


def _intervals(points: np.ndarray, mask: np.ndarray) -> list[list[float]]:
    runs, start = [], None
    for k, bad in enumerate(mask):
        if bad and start is None:
            start = k
        if not bad and start is not None:
            runs.append([float(points[start]), float(points[k - 1])])
            start = None
    if start is not None:
        runs.append([float(points[start]), float(points[-1])])
    return runs


def count_escapes(base: TaxScenario, prof: EnforcementProfile, grid) -> int:
    return sum(p_star_enforcement(base, prof, float(y)).regime is Regime.ESCAPED for y in gamma_dot_grid(grid))


@dataclass(frozen=True)
class NecessaryReport:
    satisfied: bool
    violations: list
    violating_intervals: list
    lambda_form_agrees: bool
    escapes: Optional[int] = None


def check_necessary(prof: EnforcementProfile, grid, scenario: Optional[TaxScenario] = None) -> NecessaryReport:
    """Check f >= g / (1 + g) on the grid.

    Alongside, the equivalent audit-intensity form is evaluated with tau_j = 0
    and z = 0: Lambda = -ln(1 - f) against the threshold ln(1 + g). The two
    verdicts must agree at every grid point (ties within 1e-12 count as
    agreement).
    """
    ys = gamma_dot_grid(grid)
    bad = np.zeros(len(ys), dtype=bool)
    agrees = True
    for k, y in enumerate(ys):
        g, f = prof.g(float(y)), prof.f(float(y))
        ratio = g / (1 + g)
        ok = f >= ratio
        bad[k] = not ok
        big_lambda = math.inf if f >= 1.0 else -math.log1p(-f)
        threshold = lambda_threshold(1.0, 1.0, 0.0, g)
        if (big_lambda >= threshold) != ok and abs(f - ratio) > 1e-12:
            agrees = False
    escapes = count_escapes(scenario, prof, ys) if scenario is not None else None
    return NecessaryReport(
        satisfied=not bad.any(),
        violations=[float(y) for y in ys[bad]],
        violating_intervals=_intervals(ys, bad),
        lambda_form_agrees=agrees,
        escapes=escapes,
    )


@dataclass(frozen=True)
class SufficientReport:
    satisfied: bool
    violations: list
    escapes: Optional[int] = None
    necessary: Optional[NecessaryReport] = None

    @property
    def interior_verified(self) -> Optional[bool]:
        if self.escapes is None:
            return None
        return self.escapes == 0


def check_sufficient(prof: EnforcementProfile, grid, scenario: Optional[TaxScenario] = None) -> SufficientReport:
    """Check f >= g on the grid; when it fails the necessary condition is evaluated too."""
    ys = gamma_dot_grid(grid)
    bad = np.array([prof.f(float(y)) < prof.g(float(y)) for y in ys], dtype=bool)
    escapes = count_escapes(scenario, prof, ys) if scenario is not None else None
    necessary = None if not bad.any() else check_necessary(prof, ys)
    return SufficientReport(not bad.any(), [float(y) for y in ys[bad]], escapes, necessary)


def boundary_limits(base: TaxScenario) -> dict:
    """Limits of p*(gamma_dot) at both ends of the enforcement domain."""
    require_shifting(base)
    alp: ArmsLengthPrice = base.alp
    high = alp.p_mode + base.abs_dtau / (2 * (1 + base.z) * base.tau_harmed) * alp.width
    return {"low": alp.p_edge, "high": high}
