"""Scenario files (JSON schema version "1"): loading, validation, parameter moves."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .enforcement import EnforcementProfile, build_profile
from .errors import TransferPricingError
from .fuzzy_core import ArmsLengthPrice, Side
from .profit_model import TaxScenario, linear_quadratic

SCHEMA_VERSION = "1"
REQUIRED = ("tau1", "tau2", "z", "lambda", "m", "p_edge", "p_mode", "gamma")
OPTIONAL = ("side", "s1", "s2", "a1", "b1", "c1", "a2", "b2", "c2")
SWEEP_PARAMS = ("tau1", "tau2", "z", "lambda", "gamma", "m", "gamma_dot")


class ScenarioError(TransferPricingError):
    """Validation failure tied to a field path and, when found, a source line."""

    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = f"{path} (line {line})" if line is not None else path
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.steps - 1)
        return [self.start + k * step for k in range(self.steps)]


@dataclass(frozen=True)
class ScenarioFile:
    scenario: TaxScenario
    raw: dict
    profile: Optional[EnforcementProfile] = None
    sweep: Optional[SweepSpec] = None
    source: str = "<memory>"


def _line_of(text: str, key: str) -> Optional[int]:
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


class _Checker:
    def __init__(self, text: str):
        self.text = text

    def fail(self, path: str, message: str):
        raise ScenarioError(path, message, _line_of(self.text, path.rsplit(".", 1)[-1]))

    def number(self, obj: dict, key: str, path: str, default=None) -> float:
        if key not in obj:
            if default is None:
                self.fail(path, "missing required field")
            return default
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"expected a number, got {value!r}")
        if not math.isfinite(value):
            self.fail(path, f"must be finite, got {value}")
        return float(value)

    def require(self, ok: bool, path: str, message: str):
        if not ok:
            self.fail(path, message)


def _scenario(obj, chk: _Checker) -> TaxScenario:
    if not isinstance(obj, dict):
        chk.fail("scenario", "expected an object")
    unknown = sorted(set(obj) - set(REQUIRED) - set(OPTIONAL))
    if unknown:
        chk.fail(f"scenario.{unknown[0]}", f"unknown field; valid: {', '.join(REQUIRED + OPTIONAL)}")
    v = {key: chk.number(obj, key, f"scenario.{key}") for key in REQUIRED}
    for key in ("tau1", "tau2"):
        chk.require(0.0 <= v[key] <= 1.0, f"scenario.{key}", f"must lie in [0, 1], got {v[key]}")
    chk.require(v["z"] > 0, "scenario.z", f"penalty rate must be > 0, got {v['z']}")
    chk.require(v["lambda"] > 0, "scenario.lambda", f"audit intensity must be > 0, got {v['lambda']}")
    chk.require(v["m"] > 0, "scenario.m", f"intra-firm quantity must be > 0, got {v['m']}")
    chk.require(0.0 < v["gamma"] <= 1.0, "scenario.gamma", f"tolerance must lie in (0, 1], got {v['gamma']}")
    chk.require(v["p_edge"] > 0, "scenario.p_edge", f"prices must be positive, got {v['p_edge']}")
    chk.require(v["p_mode"] > 0, "scenario.p_mode", f"prices must be positive, got {v['p_mode']}")
    chk.require(v["p_edge"] != v["p_mode"], "scenario.p_edge", "p_edge equals p_mode: degenerate range")

    if "side" in obj:
        side = obj["side"]
        chk.require(side in ("lower", "upper"), "scenario.side", f"expected 'lower' or 'upper', got {side!r}")
    else:
        side = "lower" if v["p_edge"] < v["p_mode"] else "upper"
    if side == "lower":
        chk.require(v["p_edge"] < v["p_mode"], "scenario.p_edge", "lower side needs p_edge < p_mode")
    else:
        chk.require(v["p_edge"] > v["p_mode"], "scenario.p_edge", "upper side needs p_edge > p_mode")

    extra = {key: chk.number(obj, key, f"scenario.{key}", 0.0) for key in ("s1", "a1", "b1", "c1", "a2", "b2", "c2")}
    s2 = chk.number(obj, "s2", "scenario.s2", v["m"])
    chk.require(extra["s1"] >= 0, "scenario.s1", f"sales must be >= 0, got {extra['s1']}")
    chk.require(s2 >= v["m"], "scenario.s2", f"division-2 sales must cover m = {v['m']}, got {s2}")
    for key in ("c1", "c2"):
        chk.require(extra[key] >= 0, f"scenario.{key}", f"quadratic cost coefficient must be >= 0, got {extra[key]}")

    try:
        alp = ArmsLengthPrice(Side(side), v["p_edge"], v["p_mode"], v["gamma"])
        return TaxScenario(
            tau1=v["tau1"],
            tau2=v["tau2"],
            z=v["z"],
            lam=v["lambda"],
            m=v["m"],
            alp=alp,
            div1=linear_quadratic(extra["a1"], extra["b1"], extra["c1"], extra["s1"]),
            div2=linear_quadratic(extra["a2"], extra["b2"], extra["c2"], s2),
        )
    except TransferPricingError as exc:
        raise ScenarioError("scenario", str(exc)) from exc


def _profile(obj, chk: _Checker) -> EnforcementProfile:
    if not isinstance(obj, dict):
        chk.fail("enforcement_profile", "expected an object with 'g' and 'f'")
    for key in ("g", "f"):
        spec = obj.get(key)
        if not isinstance(spec, dict) or not isinstance(spec.get("name"), str):
            chk.fail(f"enforcement_profile.{key}", "expected {\"name\": ..., \"params\": {...}}")
        if not isinstance(spec.get("params", {}), dict):
            chk.fail(f"enforcement_profile.{key}.params", "expected an object")
    try:
        return build_profile(obj["g"], obj["f"])
    except TransferPricingError as exc:
        raise ScenarioError("enforcement_profile", str(exc), _line_of(chk.text, "enforcement_profile")) from exc


def _sweep(obj, chk: _Checker) -> SweepSpec:
    if not isinstance(obj, dict):
        chk.fail("sweep", "expected an object")
    name = obj.get("parameter")
    chk.require(name in SWEEP_PARAMS, "sweep.parameter", f"unknown parameter {name!r}; valid: {', '.join(SWEEP_PARAMS)}")
    start = chk.number(obj, "from", "sweep.from")
    stop = chk.number(obj, "to", "sweep.to")
    steps = obj.get("steps")
    chk.require(isinstance(steps, int) and not isinstance(steps, bool) and steps >= 1, "sweep.steps", f"expected an integer >= 1, got {steps!r}")
    return SweepSpec(name, start, stop, steps)


def parse_scenario(text: str, source: str = "<memory>") -> ScenarioFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON: {exc.msg}", exc.lineno) from exc
    chk = _Checker(text)
    if not isinstance(raw, dict):
        raise ScenarioError("$", "top level must be an object", 1)
    version = raw.get("schema_version")
    chk.require(version == SCHEMA_VERSION, "schema_version", f"expected \"{SCHEMA_VERSION}\", got {version!r}")
    unknown = sorted(set(raw) - {"schema_version", "scenario", "enforcement_profile", "sweep"})
    if unknown:
        chk.fail(unknown[0], "unknown top-level field")
    if "scenario" not in raw:
        raise ScenarioError("scenario", "missing required section")
    scenario = _scenario(raw["scenario"], chk)
    profile = _profile(raw["enforcement_profile"], chk) if "enforcement_profile" in raw else None
    sweep = _sweep(raw["sweep"], chk) if "sweep" in raw else None
    return ScenarioFile(scenario, raw, profile, sweep, source)


def load_scenario(path) -> ScenarioFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError("$", f"cannot read {path}: {exc.strerror}") from exc
    return parse_scenario(text, str(path))


def with_parameter(s: TaxScenario, name: str, value: float) -> TaxScenario:
    """Copy of ``s`` with one sweepable parameter moved (gamma_dot is not a scenario field)."""
    if name in ("tau1", "tau2", "z", "m"):
        return s.replace(**{name: value})
    if name == "lambda":
        return s.replace(lam=value)
    if name == "gamma":
        alp = s.alp
        return s.replace(alp=ArmsLengthPrice(alp.side, alp.p_edge, alp.p_mode, value))
    raise ScenarioError("sweep.parameter", f"unknown parameter {name!r}; valid: {', '.join(SWEEP_PARAMS)}")
