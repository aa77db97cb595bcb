import math
from pathlib import Path

import numpy as np
import pytest

from fuzzy_tp.fuzzy_core import ArmsLengthPrice, Side
from fuzzy_tp.profit_model import TaxScenario, linear_quadratic

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"
GOLDEN = Path(__file__).resolve().parent / "golden"


def make_scenario(tau1=0.35, tau2=0.20, z=0.5, lam=1.0, gamma=0.5, m=10.0, p_mode=100.0, width=20.0, **divs):
    """LTP (tau2 < tau1) puts the edge below the mode, HTP above it."""
    if tau2 < tau1:
        alp = ArmsLengthPrice(Side.LOWER, p_mode - width, p_mode, gamma)
    else:
        alp = ArmsLengthPrice(Side.UPPER, p_mode + width, p_mode, gamma)
    div1 = divs.get("div1", linear_quadratic(20.0, 1.0, 0.1, 10.0))
    div2 = divs.get("div2", linear_quadratic(20.0, 1.0, 0.1, 15.0))
    return TaxScenario(tau1, tau2, z, lam, m, alp, div1, div2)


def random_interior(rng: np.random.Generator, *, min_dtau=1e-3):
    """Random interior-regime scenario: taxes in [0.05, 0.5], z in (0, 2], gamma in [0.1, 1],
    lambda at least 1.01 * lambda_min."""
    from fuzzy_tp.optimizer import lambda_threshold

    while True:
        t1, t2 = rng.uniform(0.05, 0.5, size=2)
        if abs(t1 - t2) < min_dtau:
            continue
        z = rng.uniform(0.01, 2.0)
        gamma = rng.uniform(0.1, 1.0)
        tau_i = max(t1, t2)
        try:
            lam_min = lambda_threshold(abs(t1 - t2), tau_i, z, gamma)
        except Exception:
            continue
        lam = lam_min * rng.uniform(1.01, 20.0)
        if not math.isfinite(lam) or lam > 50:
            continue
        p_mode = rng.uniform(20.0, 200.0)
        width = rng.uniform(0.05, 0.4) * p_mode
        return make_scenario(t1, t2, z, lam, gamma, m=rng.uniform(1.0, 20.0), p_mode=p_mode, width=width,
                             div2=linear_quadratic(20.0, 1.0, 0.1, 25.0))


@pytest.fixture
def ltp():
    return make_scenario()


@pytest.fixture
def htp():
    return make_scenario(tau1=0.20, tau2=0.35)


ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    label, title = marker.args
    verdict = "PASS" if call.excinfo is None else "FAIL"
    if ACCEPTANCE.get(label, ("PASS",))[0] == "FAIL":
        verdict = "FAIL"
    ACCEPTANCE[label] = (verdict, title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE):
        verdict, title = ACCEPTANCE[label]
        terminalreporter.write_line(f"{verdict}  criterion {label}: {title}")
