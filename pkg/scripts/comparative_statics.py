"""Comparative statics of the optimal price on a scenario file.

Writes one CSV per swept parameter (p_star, delta_p, regime and, where defined,
the analytic slope) so the sign laws can be inspected or plotted.

    python scripts/comparative_statics.py scenarios/ltp.json --out-dir results/
"""

from __future__ import annotations

import argparse
import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fuzzy_tp import sensitivity
from fuzzy_tp.errors import TransferPricingError
from fuzzy_tp.optimizer import optimal_price
from fuzzy_tp.scenario import load_scenario, with_parameter

log = logging.getLogger("comparative_statics")

SLOPES = {
    "tau1": None,
    "tau2": None,
    "lambda": sensitivity.dp_dlambda,
    "z": sensitivity.dp_dz,
    "gamma": sensitivity.dp_dgamma,
}


@dataclass
class Config:
    scenario: Path
    out_dir: Path
    steps: int = 50
    ranges: dict = field(
        default_factory=lambda: {
            "tau1": (0.05, 0.6),
            "tau2": (0.05, 0.6),
            "lambda": (0.05, 3.0),
            "z": (0.05, 3.0),
            "gamma": (0.05, 1.0),
        }
    )


def sweep(cfg: Config, name: str) -> Path:
    base = load_scenario(cfg.scenario).scenario
    lo, hi = cfg.ranges[name]
    path = cfg.out_dir / f"{cfg.scenario.stem}_{name}.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([name, "p_star", "delta_p", "regime", "slope"])
        for value in np.linspace(lo, hi, cfg.steps):
            try:
                s = with_parameter(base, name, float(value))
                opt = optimal_price(s)
            except TransferPricingError as exc:
                writer.writerow([f"{value:.6g}", "", "", type(exc).__name__, ""])
                continue
            slope = ""
            if opt.interior and SLOPES[name] is not None:
                slope = f"{SLOPES[name](s):.8g}"
            elif opt.interior and name == ("tau1" if s.tau2 < s.tau1 else "tau2"):
                # the tau slope is defined for the harmed country's rate only
                slope = f"{sensitivity.dp_dtau(s):.8g}"
            row = [f"{value:.6g}", "", "", opt.regime.value, slope]
            if opt.interior:
                row[1:3] = [f"{opt.p_star:.8g}", f"{opt.delta_p:.8g}"]
            writer.writerow(row)
    return path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("scenario", type=Path)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--params", nargs="+", default=list(SLOPES), choices=list(SLOPES))
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = Config(args.scenario, args.out_dir, args.steps)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name in args.params:
        log.info("wrote %s", sweep(cfg, name))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
