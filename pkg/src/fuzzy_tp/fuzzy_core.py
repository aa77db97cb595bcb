"""Fuzzy numbers of LR type and the one-sided fuzzy arm's length price."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DegenerateRange, DomainError, EmptyCut, IncompatibleModes, InvalidGamma

CUT_XTOL = 1e-12


@dataclass(frozen=True)
class PowerShape:
    """Shape t -> t**exponent on [0, 1]; t = 0 at the support edge, 1 at the mode."""

    exponent: float = 1.0

    def __post_init__(self):
        if not self.exponent > 0:
            raise InvalidGamma(f"shape exponent must be positive, got {self.exponent}")

    def __call__(self, t: float) -> float:
        return t**self.exponent

    def inverse(self, a: float) -> float:
        return a ** (1.0 / self.exponent)


LINEAR = PowerShape(1.0)


def _invert_shape(shape: Callable[[float], float], alpha: float, width: float) -> float:
    """Smallest t in [0, 1] with shape(t) >= alpha."""
    inverse = getattr(shape, "inverse", None)
    if inverse is not None:
        return min(max(inverse(alpha), 0.0), 1.0)
    lo, hi = 0.0, 1.0
    tol = CUT_XTOL / width if width > 0 else CUT_XTOL
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if shape(mid) >= alpha:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class FuzzyNumber:
    """LR fuzzy number with knots support_lo <= mode_lo <= mode_hi <= support_hi.

    ``lower_shape`` grades the rising branch as a function of
    (x - support_lo) / (mode_lo - support_lo); ``upper_shape`` grades the
    falling branch as a function of (x - support_hi) / (mode_hi - support_hi).
    Both are non-decreasing maps of [0, 1] onto [0, 1]. Infinite outer knots are
    allowed and give a one-sided number saturated at 1.
    """

    support_lo: float
    mode_lo: float
    mode_hi: float
    support_hi: float
    lower_shape: Callable[[float], float] = field(default=LINEAR)
    upper_shape: Callable[[float], float] = field(default=LINEAR)

    def __post_init__(self):
        if not (self.support_lo <= self.mode_lo <= self.mode_hi <= self.support_hi):
            raise DomainError(
                "knots must satisfy support_lo <= mode_lo <= mode_hi <= support_hi, got "
                f"({self.support_lo}, {self.mode_lo}, {self.mode_hi}, {self.support_hi})"
            )

    @classmethod
    def trapezoid(cls, a: float, b: float, c: float, d: float) -> FuzzyNumber:
        return cls(a, b, c, d)

    @classmethod
    def triangle(cls, a: float, b: float, c: float) -> FuzzyNumber:
        return cls(a, b, b, c)

    def membership(self, x: float) -> float:
        if self.mode_lo <= x <= self.mode_hi:
            return 1.0
        if x < self.mode_lo:
            if x <= self.support_lo:
                return 0.0
            t = (x - self.support_lo) / (self.mode_lo - self.support_lo)
            return float(self.lower_shape(t))
        if x >= self.support_hi:
            return 0.0
        t = (x - self.support_hi) / (self.mode_hi - self.support_hi)
        return float(self.upper_shape(t))

    def alpha_cut(self, alpha: float) -> tuple[float, float]:
        """Closed interval {x : membership(x) >= alpha} for alpha in (0, 1]."""
        if alpha > 1.0:
            raise EmptyCut(f"alpha={alpha} exceeds the height of a normalized number")
        if not alpha > 0.0:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
        if math.isinf(self.support_lo) or self.mode_lo == self.support_lo:
            lo = self.mode_lo
        else:
            width = self.mode_lo - self.support_lo
            lo = self.support_lo + _invert_shape(self.lower_shape, alpha, width) * width
        if math.isinf(self.support_hi) or self.mode_hi == self.support_hi:
            hi = self.mode_hi
        else:
            width = self.mode_hi - self.support_hi
            hi = self.support_hi + _invert_shape(self.upper_shape, alpha, -width) * width
        return lo, hi


def membership(fn: FuzzyNumber, x: float) -> float:
    return fn.membership(x)


def alpha_cut(fn: FuzzyNumber, alpha: float) -> tuple[float, float]:
    return fn.alpha_cut(alpha)


def reconstruct_membership(fn: FuzzyNumber, x: float, alpha_grid_size: int) -> float:
    """Rebuild membership(x) as sup over alpha of min(alpha, 1[x in cut(alpha)])."""
    if alpha_grid_size < 2:
        raise DomainError("alpha_grid_size must be at least 2")
    best = 0.0
    for alpha in np.linspace(0.0, 1.0, alpha_grid_size)[1:]:
        lo, hi = fn.alpha_cut(float(alpha))
        if lo <= x <= hi:
            best = max(best, float(alpha))
    return best


class Side(str, Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class ArmsLengthPrice:
    """One-sided fuzzy arm's length price with power shape of exponent ``gamma``.

    On the interval of interest between ``p_edge`` and ``p_mode`` the grade is
    ((p - p_edge) / (p_mode - p_edge)) ** gamma; on the mode side it saturates
    at 1 and beyond the edge it is 0.
    """

    side: Side
    p_edge: float
    p_mode: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        if self.p_edge == self.p_mode:
            raise DegenerateRange(f"p_edge == p_mode == {self.p_mode}")
        if self.side is Side.LOWER and not self.p_edge < self.p_mode:
            raise DomainError(f"lower side needs p_edge < p_mode, got {self.p_edge} >= {self.p_mode}")
        if self.side is Side.UPPER and not self.p_edge > self.p_mode:
            raise DomainError(f"upper side needs p_edge > p_mode, got {self.p_edge} <= {self.p_mode}")
        if not (0.0 < self.gamma <= 1.0):
            raise InvalidGamma(f"gamma must lie in (0, 1], got {self.gamma}")

    @property
    def width(self) -> float:
        """Signed distance p_edge - p_mode (negative on the lower side)."""
        return self.p_edge - self.p_mode

    def membership(self, p: float) -> float:
        t = (p - self.p_edge) / (self.p_mode - self.p_edge)
        if t <= 0.0:
            return 0.0
        if t >= 1.0:
            return 1.0
        return t**self.gamma

    def inverse_membership(self, alpha: float) -> float:
        if not (0.0 <= alpha <= 1.0):
            raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
        return self.p_edge + alpha ** (1.0 / self.gamma) * (self.p_mode - self.p_edge)

    def to_fuzzy_number(self) -> FuzzyNumber:
        shape = PowerShape(self.gamma)
        if self.side is Side.LOWER:
            return FuzzyNumber(self.p_edge, self.p_mode, math.inf, math.inf, lower_shape=shape)
        return FuzzyNumber(-math.inf, -math.inf, self.p_mode, self.p_edge, upper_shape=shape)


def make_arms_length(side: Side | str, p_edge: float, p_mode: float, gamma: float) -> ArmsLengthPrice:
    return ArmsLengthPrice(Side(side), float(p_edge), float(p_mode), float(gamma))


def inverse_membership(alp: ArmsLengthPrice, alpha: float) -> float:
    return alp.inverse_membership(alpha)


def intersect(lower: ArmsLengthPrice, upper: ArmsLengthPrice) -> FuzzyNumber:
    """Two-sided number whose grade is the pointwise min of both one-sided grades."""
    if lower.side is not Side.LOWER or upper.side is not Side.UPPER:
        raise DomainError("intersect expects (lower, upper) arm's length prices")
    if lower.p_mode > upper.p_mode:
        raise IncompatibleModes(f"lower mode {lower.p_mode} exceeds upper mode {upper.p_mode}")
    return FuzzyNumber(
        lower.p_edge,
        lower.p_mode,
        upper.p_mode,
        upper.p_edge,
        lower_shape=PowerShape(lower.gamma),
        upper_shape=PowerShape(upper.gamma),
    )
