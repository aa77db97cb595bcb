"""Command-line front end: ``alp solve|sweep|sensitivity|enforcement <file>``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional

from . import enforcement, optimizer, sensitivity
from .errors import NoIncentive, SideMismatch, Singular, TransferPricingError
from .optimizer import Optimum
from .profit_model import TaxScenario
from .scenario import SWEEP_PARAMS, ScenarioError, SweepSpec, load_scenario, with_parameter

EXIT_OK, EXIT_INVALID, EXIT_ESCAPED, EXIT_CROSSCHECK = 0, 1, 2, 3
DEFAULT_PRECISION = 6
SENSITIVITY_TOL = 1e-4
# Denominator floor for relative errors, as a fraction of |p_edge - p_mode|,
# so that exactly-zero derivatives compare on an absolute scale.
REL_ERR_FLOOR = 1e-3
CSV_HEADER = ["param", "p_star", "delta_p", "alpha", "gain", "regime"]


def _error(message: str, *args) -> None:
    sys.stderr.write("alp: " + (message % args if args else message) + "\n")


class Formatter:
    """Rounds numbers to a fixed count of decimals, or keeps full precision."""

    def __init__(self, digits: Optional[int]):
        self.digits = digits

    def num(self, x):
        if x is None:
            return None
        if isinstance(x, bool) or isinstance(x, int):
            return x
        if not math.isfinite(x):
            return None
        if self.digits is None:
            return float(x)
        return round(float(x), self.digits) + 0.0

    def cell(self, x) -> str:
        value = self.num(x)
        return "" if value is None else repr(value)


def _precision(text: Optional[str]) -> Optional[int]:
    if text is None:
        return DEFAULT_PRECISION
    if text == "full":
        return None
    try:
        digits = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"precision must be an integer or 'full', got {text!r}") from None
    if digits < 0:
        raise argparse.ArgumentTypeError("precision must be >= 0")
    return digits


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _optimum_fields(opt: Optimum, fmt: Formatter) -> dict:
    return {
        "regime": opt.regime.value,
        "p_star": fmt.num(opt.p_star),
        "delta_p": fmt.num(opt.delta_p),
        "alpha": fmt.num(opt.alpha),
        "gain": fmt.num(opt.gain),
        "share": fmt.num(opt.share),
    }


def cmd_solve(args, fmt: Formatter) -> int:
    sf = load_scenario(args.file)
    s = sf.scenario
    try:
        diag = s.diagnosis
        opt = optimizer.optimal_price(s)
    except NoIncentive:
        _error("tau1 == tau2 == %s: no profit-shifting incentive (check tau1, tau2)", s.tau1)
        return EXIT_INVALID
    payload = {"case": diag.case.value, "harmed_country": diag.harmed_country, "side": diag.side.value}
    payload.update(_optimum_fields(opt, fmt))
    try:
        payload["lambda_min"] = fmt.num(optimizer.audit_threshold(s))
    except TransferPricingError:
        payload["lambda_min"] = None
    if opt.interior:
        _emit_json(payload)
        return EXIT_OK
    payload["crisp_slope"] = fmt.num(opt.slope)
    payload["margin_slope"] = fmt.num(optimizer.margin_slope(s))
    if args.cap_escaped:
        payload.update(
            capped=True,
            p_star=fmt.num(s.alp.p_edge),
            delta_p=fmt.num(s.alp.width),
            alpha=fmt.num(0.0),
        )
    _emit_json(payload)
    return EXIT_ESCAPED


def _sweep_point(sf, name: str, value: float) -> tuple[Optional[Optimum], str]:
    try:
        if name == "gamma_dot":
            opt = enforcement.p_star_enforcement(sf.scenario, sf.profile, value)
        else:
            opt = optimizer.optimal_price(with_parameter(sf.scenario, name, value))
    except NoIncentive:
        return None, "no_incentive"
    except SideMismatch:
        return None, "side_mismatch"
    except TransferPricingError:
        return None, "invalid"
    return opt, opt.regime.value


def _optimum_row(param: float, opt: Optional[Optimum], label: str, fmt: Formatter) -> list[str]:
    if opt is None or not opt.interior:
        return [fmt.cell(param), "", "", "", "", label]
    return [fmt.cell(param), fmt.cell(opt.p_star), fmt.cell(opt.delta_p), fmt.cell(opt.alpha), fmt.cell(opt.gain), label]


def _write_csv(rows: list[list[str]], header: list[str], out: Optional[str]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def cmd_sweep(args, fmt: Formatter) -> int:
    sf = load_scenario(args.file)
    base = sf.sweep
    name = args.param or (base.parameter if base else None)
    if name not in SWEEP_PARAMS:
        _error("unknown sweep parameter %r; valid: %s", name, ", ".join(SWEEP_PARAMS))
        return EXIT_INVALID
    start = args.start if args.start is not None else (base.start if base else None)
    stop = args.stop if args.stop is not None else (base.stop if base else None)
    steps = args.steps if args.steps is not None else (base.steps if base else None)
    if start is None or stop is None or steps is None:
        _error("sweep range incomplete: give --from, --to and --steps or a sweep block")
        return EXIT_INVALID
    if steps < 1:
        _error("--steps must be >= 1, got %d", steps)
        return EXIT_INVALID
    if name == "gamma_dot" and sf.profile is None:
        _error("sweeping gamma_dot needs an enforcement_profile block")
        return EXIT_INVALID
    values = SweepSpec(name, start, stop, steps).values()
    rows = [_optimum_row(v, *_sweep_point(sf, name, v), fmt) for v in values]
    _write_csv(rows, CSV_HEADER, args.out)
    return EXIT_OK


def _rel_err(analytic: float, fd: float, floor: float) -> float:
    return abs(analytic - fd) / max(abs(analytic), abs(fd), floor)


def cmd_sensitivity(args, fmt: Formatter) -> int:
    sf = load_scenario(args.file)
    s: TaxScenario = sf.scenario
    try:
        report = sensitivity.sensitivity_report(s)
    except Singular as exc:
        _error("%s", exc)
        return EXIT_INVALID
    except TransferPricingError as exc:
        _error("%s", exc)
        return EXIT_INVALID
    opt = optimizer.optimal_price(s)
    checks = [
        ("dp_dtau", report.dp_dtau, "tau", 1),
        ("d2p_dtau2", report.d2p_dtau2, "tau", 2),
        ("dp_dlambda", report.dp_dlambda, "lambda", 1),
        ("dp_dz", report.dp_dz, "z", 1),
        ("dp_dgamma", report.dp_dgamma, "gamma", 1),
    ]
    floor = REL_ERR_FLOOR * abs(s.alp.width)
    rows, worst = [], 0.0
    for name, analytic, param, order in checks:
        fd = sensitivity.finite_difference(s, param, order)
        err = _rel_err(analytic, fd, floor)
        worst = max(worst, err)
        rows.append({"name": name, "analytic": fmt.num(analytic), "fd": fmt.num(fd), "rel_err": float(f"{err:.3e}")})
    payload = {
        "regime": opt.regime.value,
        "delta_p": fmt.num(optimizer.price_gap(s)),
        "derivatives": rows,
        "elasticity_tau": fmt.num(report.elasticity_tau),
        "semi2": fmt.num(report.semi2),
        "max_rel_err": float(f"{worst:.3e}"),
        "tolerance": SENSITIVITY_TOL,
    }
    _emit_json(payload)
    return EXIT_CROSSCHECK if worst > SENSITIVITY_TOL else EXIT_OK


def cmd_enforcement(args, fmt: Formatter) -> int:
    sf = load_scenario(args.file)
    if sf.profile is None:
        _error("enforcement_profile: missing section")
        return EXIT_INVALID
    s, prof = sf.scenario, sf.profile
    if args.grid_steps < 2:
        _error("--grid-steps must be >= 2, got %d", args.grid_steps)
        return EXIT_INVALID
    try:
        grid = enforcement.gamma_dot_grid(args.grid_steps)
        necessary = enforcement.check_necessary(prof, grid, s)
        sufficient = enforcement.check_sufficient(prof, grid, s)
        limits = enforcement.boundary_limits(s)
        sweep = [(float(y), enforcement.p_star_enforcement(s, prof, float(y))) for y in grid]
    except TransferPricingError as exc:
        _error("%s", exc)
        return EXIT_INVALID
    payload = {
        "grid_steps": args.grid_steps,
        "necessary": {
            "satisfied": necessary.satisfied,
            "violating_intervals": [[fmt.num(a), fmt.num(b)] for a, b in necessary.violating_intervals],
            "violations": len(necessary.violations),
            "lambda_form_agrees": necessary.lambda_form_agrees,
        },
        "sufficient": {
            "satisfied": sufficient.satisfied,
            "violations": len(sufficient.violations),
            "interior_verified": sufficient.interior_verified,
        },
        "escapes": necessary.escapes,
        "boundary": {
            "limit_low": fmt.num(limits["low"]),
            "limit_high": fmt.num(limits["high"]),
            "p_star_low": fmt.num(sweep[0][1].p_star),
            "p_star_high": fmt.num(sweep[-1][1].p_star),
        },
        "profile": {key: fmt.num(val) for key, val in prof.boundary_values().items()},
    }
    if args.out:
        rows = [_optimum_row(y, opt, opt.regime.value, fmt) for y, opt in sweep]
        _write_csv(rows, ["gamma_dot", *CSV_HEADER[1:]], args.out)
    _emit_json(payload)
    # Sufficiency without interiority, or a broken equivalence, is a failed cross-check.
    if (sufficient.satisfied and necessary.escapes) or not necessary.lambda_form_agrees:
        return EXIT_CROSSCHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alp", description="Optimal transfer prices under a fuzzy arm's length range.")
    parser.add_argument(
        "--precision",
        default=None,
        help="decimals for printed numbers, or 'full' (default 6; env ALP_PRECISION)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="closed-form optimum as JSON")
    p.add_argument("file")
    p.add_argument("--cap-escaped", action="store_true", help="report p* = p_edge in the escaped regime")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="one-parameter sweep as CSV")
    p.add_argument("file")
    p.add_argument("--param", help=f"one of {', '.join(SWEEP_PARAMS)}")
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sensitivity", help="analytic derivatives with finite-difference cross-check")
    p.add_argument("file")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("enforcement", help="necessary/sufficient interiority conditions over gamma_dot")
    p.add_argument("file")
    p.add_argument("--grid-steps", type=int, default=1000)
    p.add_argument("--out", help="write the gamma_dot sweep of p* as CSV")
    p.set_defaults(func=cmd_enforcement)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        digits = _precision(args.precision if args.precision is not None else os.environ.get("ALP_PRECISION"))
    except argparse.ArgumentTypeError as exc:
        _error("%s", exc)
        return EXIT_INVALID
    try:
        return args.func(args, Formatter(digits))
    except ScenarioError as exc:
        _error("%s", exc)
        return EXIT_INVALID
    except TransferPricingError as exc:
        _error("%s", exc)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
