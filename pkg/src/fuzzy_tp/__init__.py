"""Optimal transfer prices against a fuzzy arm's length range under Poisson audits."""

from .enforcement import EnforcementProfile, build_profile, check_necessary, check_sufficient, p_star_enforcement
from .errors import TransferPricingError
from .fuzzy_core import ArmsLengthPrice, FuzzyNumber, Side
from .optimizer import Optimum, Regime, audit_threshold, optimal_price, shifting_gain
from .profit_model import TaxScenario, classify, linear_quadratic
from .scenario import load_scenario
from .sensitivity import sensitivity_report

__version__ = "0.1.0"
