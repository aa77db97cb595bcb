"""Recompute the frozen reference values with independent numerical oracles.

The library's closed forms are compared against scipy's bounded scalar
maximiser, scipy.special and a direct integral, on the LTP fixture
(tau1 = 0.35, tau2 = 0.20, z = 0.5, lambda = 1, gamma = 0.5, edge 80, mode 100).

    python scripts/oracle_check.py
"""

from __future__ import annotations

import argparse
import math

from scipy import integrate, optimize, special

from fuzzy_tp.audit_model import poisson_cdf, regularized_upper_gamma
from fuzzy_tp.enforcement import EnforcementProfile, identity, p_star_enforcement
from fuzzy_tp.fuzzy_core import ArmsLengthPrice, Side
from fuzzy_tp.optimizer import audit_threshold, optimal_price, shifting_gain
from fuzzy_tp.profit_model import TaxScenario, expected_net_profit, linear_quadratic
from fuzzy_tp.sensitivity import lambert_w0


def fixture() -> TaxScenario:
    alp = ArmsLengthPrice(Side.LOWER, 80.0, 100.0, 0.5)
    return TaxScenario(
        0.35, 0.20, 0.5, 1.0, 10.0, alp, linear_quadratic(20, 1, 0.1, 10), linear_quadratic(20, 1, 0.1, 15)
    )


def checks() -> list[tuple[str, float, float, float]]:
    s = fixture()
    rows = []

    opt = optimal_price(s)
    res = optimize.minimize_scalar(lambda p: -expected_net_profit(s, p), bounds=(80.0, 100.0), method="bounded",
                                   options={"xatol": 1e-10})
    rows.append(("p_star", opt.p_star, res.x, 20 * 1e-6))

    direct = expected_net_profit(s, opt.p_star) - expected_net_profit(s, 100.0)
    rows.append(("gain", shifting_gain(s, opt), direct, 1e-9))

    # smallest lambda at which the bounded maximiser stays off the edge
    def interior_margin(lam):
        sl = s.replace(lam=lam)
        p = optimize.minimize_scalar(lambda q: -expected_net_profit(sl, q), bounds=(80.0, 100.0),
                                     method="bounded", options={"xatol": 1e-12}).x
        return p - 80.0 - 1e-9
    lam_root = optimize.brentq(lambda lam: (1 - math.exp(-lam)) * 1.5 * 0.35 * 3 - 0.15, 1e-6, 5.0)
    rows.append(("lambda_min", audit_threshold(s), lam_root, 1e-12))
    rows.append(("interior just above lambda_min", float(interior_margin(lam_root * 1.01) > 0), 1.0, 0.0))

    prof = EnforcementProfile(identity(), identity())
    rows.append(("p_star(gamma_dot = 1)", p_star_enforcement(s, prof, 1.0).p_star, 100 - 0.15 / (2 * 1.5 * 0.35) * 20, 1e-12))

    worst = max(abs(poisson_cdf(k, lam) - special.gammaincc(k + 1, lam)) for k in range(51) for lam in (0.5, 5.0, 30.0))
    rows.append(("poisson cdf vs gammaincc (max abs)", worst, 0.0, 1e-12))
    rows.append(("regularized_upper_gamma(6, 0.5)", regularized_upper_gamma(6, 0.5), special.gammaincc(6, 0.5), 1e-14))

    worst = max(abs(lambert_w0(x) - special.lambertw(x).real) for x in (-0.3, 0.1, 1.0, math.e, 50.0, 1e3))
    rows.append(("lambert W vs scipy (max abs)", worst, 0.0, 1e-12))

    lam_int, _ = integrate.quad(lambda y: 2 * y / (1 - y * y), 0.0, 0.9, epsabs=1e-13)
    rows.append(("cumulative intensity, f = y^2 at 0.9", lam_int, -math.log(0.19), 1e-9))
    return rows


def main(argv=None) -> int:
    argparse.ArgumentParser(description=__doc__.splitlines()[0]).parse_args(argv)
    failed = 0
    for name, value, oracle, tol in checks():
        ok = abs(value - oracle) <= tol
        failed += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {name:40s} {value:.15g}  oracle {oracle:.15g}  tol {tol:g}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
