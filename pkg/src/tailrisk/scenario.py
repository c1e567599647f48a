"""Scenario aggregation and Basel-style capital charges.

A scenario-based risk measure combines per-scenario risk values
``x_1..x_m`` as ``f(x) = s * max_{w in W} sum_i w_i x_i`` over a finite
set ``W`` of prior weight vectors. The Basel II, 2.5 and 3.5 trading-book
charges are instances with two priors.
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dist import EmpiricalDistribution, parse_distribution, read_series
from .errors import ConfigError
from .measures import RiskMeasureSpec

SIMPLEX_TOL = 1e-12
BASEL_WINDOW = 60


@dataclass(frozen=True)
class PriorSet:
    """Finite set of probability vectors over ``m`` scenarios (rows of ``weights``)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, ndmin=2)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise ValueError("PriorSet needs at least one weight vector")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("prior weights must be finite and nonnegative")
        bad = np.abs(w.sum(axis=1) - 1.0) > SIMPLEX_TOL
        if np.any(bad):
            raise ValueError(f"prior rows {np.flatnonzero(bad).tolist()} do not sum to 1")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return int(self.weights.shape[1])

    def __len__(self):
        return int(self.weights.shape[0])


@dataclass(frozen=True)
class ScenarioRiskInput:
    """Per-scenario risk values and the overall scale ``s``."""

    values: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1 or not np.all(np.isfinite(v)):
            raise ValueError("scenario values must be finite and nonempty")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def aggregate(x, W: PriorSet, s: float | None = None) -> float:
    """``s * max_w <w, x>``.

    ``x`` is a :class:`ScenarioRiskInput` or a plain vector; ``s`` overrides
    the input's scale when given.
    """
    if isinstance(x, ScenarioRiskInput):
        values, scale = x.values, x.scale if s is None else s
    else:
        values, scale = np.asarray(x, dtype=float).ravel(), 1.0 if s is None else s
    if not scale > 0:
        raise ValueError("scale must be positive")
    if values.size != W.m:
        raise ValueError(f"dimension mismatch: {values.size} values, priors over {W.m} scenarios")
    return float(scale * np.max(W.weights @ values))


def _history(h, name):
    h = np.asarray(h, dtype=float).ravel()
    if h.size != BASEL_WINDOW:
        raise ValueError(f"{name} must hold exactly {BASEL_WINDOW} values, got {h.size}")
    return h


def basel2_charge(var_today: float, var_history, s_t: float = 3.0) -> float:
    """``max(VaR_{t-1}, s_t * mean of the last 60 VaRs)`` with ``s_t >= 3``."""
    h = _history(var_history, "var_history")
    if not s_t >= 3.0:
        raise ValueError("Basel II multiplier must be >= 3")
    return float(max(var_today, s_t * h.mean()))


def basel2_scenarios(var_history) -> np.ndarray:
    """61 scenario values: the 60 VaRs (most recent first) and a zero."""
    return np.append(_history(var_history, "var_history"), 0.0)


def basel2_priors(s_t: float = 3.0) -> PriorSet:
    """The two priors ``(1/s, 0, ..., 0, 1 - 1/s)`` and ``(1/60, ..., 1/60, 0)``."""
    if not s_t >= 1.0:
        raise ValueError("multiplier must be >= 1")
    p1 = np.zeros(BASEL_WINDOW + 1)
    p1[0], p1[-1] = 1.0 / s_t, 1.0 - 1.0 / s_t
    p2 = np.full(BASEL_WINDOW + 1, 1.0 / BASEL_WINDOW)
    p2[-1] = 0.0
    return PriorSet(np.vstack([p1, p2]))


def basel25_charge(var_today: float, var_history, svar_today: float, svar_history,
                   s_t: float = 3.0, s_t_stressed: float | None = None) -> float:
    """Basel 2.5: the Basel II term plus the same term on stressed VaR."""
    s2 = s_t if s_t_stressed is None else s_t_stressed
    return basel2_charge(var_today, var_history, s_t) + basel2_charge(svar_today, svar_history, s2)


def basel35_charge(es_today: float, es_history, s: float = 3.0) -> float:
    """``max(ES_{t-1}, s * mean of the last 60 ES values)``.

    Passing median-shortfall values instead gives the MS-based variant.
    """
    h = _history(es_history, "es_history")
    if not s > 0:
        raise ValueError("multiplier must be positive")
    return float(max(es_today, s * h.mean()))


# --------------------------------------------------------------------------
# Scenario configuration files
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    label: str
    spec: RiskMeasureSpec
    source: str  # "value=<x>", "dist=<law>" or "data=<csv>"


@dataclass(frozen=True)
class ScenarioConfig:
    """Parsed scenario file: scenarios, priors and scale."""

    scenarios: tuple
    priors: PriorSet
    scale: float = 1.0

    def risk_input(self, base_dir: str | Path = ".") -> ScenarioRiskInput:
        vals = [_evaluate(sc, Path(base_dir)) for sc in self.scenarios]
        return ScenarioRiskInput(np.array(vals), self.scale)

    def charge(self, base_dir: str | Path = ".") -> float:
        return aggregate(self.risk_input(base_dir), self.priors)


def _evaluate(sc: Scenario, base: Path) -> float:
    kind, _, arg = sc.source.partition("=")
    if kind == "value":
        return float(arg)
    if kind == "dist":
        return sc.spec.evaluate(parse_distribution(arg))
    path = Path(arg) if Path(arg).is_absolute() else base / arg
    _, values = read_series(path)
    return sc.spec.evaluate(EmpiricalDistribution(values))


def parse_scenario_file(path: str | Path) -> ScenarioConfig:
    """Read a scenario file.

    Format, one directive per line (``#`` starts a comment)::

        scale 1.5
        scenario calm   var@0.99  dist=normal:mu=0,sigma=1
        scenario crisis ms@0.975  data=crisis_losses.csv
        scenario book   es@0.975  value=12.5
        prior 0.5 0.5 0
        prior 0   0   1

    Prior rows must lie on the simplex to within 1e-12.
    """
    text = Path(path).read_text()
    return parse_scenario_text(text, str(path))


def parse_scenario_text(text: str, origin: str = "<string>") -> ScenarioConfig:
    scenarios, priors, scale = [], [], 1.0
    labels = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{origin}:{lineno}"
        try:
            parts = shlex.split(line)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
        key, args = parts[0].lower(), parts[1:]
        try:
            if key == "scale":
                if len(args) != 1:
                    raise ConfigError("scale takes one value")
                scale = float(args[0])
                if not scale > 0:
                    raise ConfigError("scale must be positive")
            elif key == "scenario":
                if len(args) != 3:
                    raise ConfigError("expected: scenario <label> <measure> value=|dist=|data=")
                label, spec_text, source = args
                if label in labels:
                    raise ConfigError(f"duplicate scenario label {label!r}")
                if source.partition("=")[0] not in ("value", "dist", "data"):
                    raise ConfigError(f"source must start with value=, dist= or data=, got {source!r}")
                labels.add(label)
                scenarios.append(Scenario(label, RiskMeasureSpec.parse(spec_text), source))
            elif key == "prior":
                row = [float(a) for a in args]
                if not row or min(row) < 0 or abs(sum(row) - 1.0) > SIMPLEX_TOL:
                    raise ConfigError("prior weights must be nonnegative and sum to 1")
                priors.append((where, row))
            else:
                raise ConfigError(f"unknown directive {key!r}")
        except ConfigError as exc:
            raise ConfigError(f"{where}: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    if not scenarios:
        raise ConfigError(f"{origin}: no scenarios defined")
    if not priors:
        raise ConfigError(f"{origin}: no prior rows defined")
    m = len(scenarios)
    for where, row in priors:
        if len(row) != m:
            raise ConfigError(f"{where}: prior has {len(row)} weights for {m} scenarios")
    try:
        W = PriorSet(np.array([row for _, row in priors]))
    except ValueError as exc:
        raise ConfigError(f"{origin}: {exc}") from None
    return ScenarioConfig(tuple(scenarios), W, scale)
