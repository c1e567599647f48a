"""Distortion (Choquet) risk measures.

A distortion function ``h`` is increasing on [0, 1] with ``h(0) = 0`` and
``h(1) = 1``; it may jump at interior points, and the value *at* a jump
matters (it separates left quantiles, right quantiles and their mixtures).
The induced measure is

    rho(X) = s * ( int_0^inf h(S(x)) dx + int_-inf^0 (h(S(x)) - 1) dx )

with ``S(x) = P(X > x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import dist as _dist
from .dist import (
    PROB_TOL,
    DiscreteDistribution,
    Distribution,
    TailDistribution,
    as_discrete,
)
from .errors import ConfigError, InfiniteQuantileError, NonIntegrableError


@dataclass(frozen=True)
class Jump:
    """Discontinuity of ``h`` at ``at``: limits from the left/right and the point value."""

    at: float
    left: float
    value: float
    right: float


class DistortionFunction:
    """Increasing map ``h: [0, 1] -> [0, 1]`` with explicit jump description.

    Parameters
    ----------
    fn : callable
        Vectorised rule used away from declared jumps.
    jumps : sequence of Jump
        Points where ``h`` is discontinuous. The point value stored here
        overrides ``fn`` exactly at ``at``.
    kinks : sequence of float
        Points where ``h`` is continuous but not smooth; used only to split
        quadrature ranges.
    family : str
        Tag of the known family, or ``"Custom"``.
    """

    def __init__(self, fn: Callable, jumps: Sequence[Jump] = (), kinks=(), family="Custom",
                 params=None, validate=True):
        self._fn = fn
        self.jumps = tuple(sorted(jumps, key=lambda j: j.at))
        self.kinks = tuple(float(k) for k in kinks)
        self.family = family
        self.params = dict(params or {})
        if validate:
            self._validate()

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.family}({args})"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(self._fn(x), dtype=float).copy()
        for j in self.jumps:
            out = np.where(x == j.at, j.value, out)
        out = np.where(x <= 0.0, 0.0, np.where(x >= 1.0, 1.0, out))
        return float(out) if out.ndim == 0 else out

    def at_survival(self, s):
        """Evaluate at survival probabilities, snapping values within
        ``PROB_TOL`` of a jump onto the jump location."""
        s = np.asarray(s, dtype=float)
        for j in self.jumps:
            s = np.where(np.abs(s - j.at) <= PROB_TOL, j.at, s)
        s = np.where(s <= PROB_TOL, 0.0, np.where(s >= 1.0 - PROB_TOL, 1.0, s))
        return self(s)

    def g(self, u):
        """Dual distortion ``g(u) = 1 - h(1 - u)``."""
        return 1.0 - np.asarray(self(1.0 - np.asarray(u, dtype=float)))

    @property
    def critical_points(self) -> tuple[float, ...]:
        return tuple(j.at for j in self.jumps) + self.kinks

    def _validate(self):
        grid = np.linspace(0.0, 1.0, 10_001)
        pts = np.unique(np.concatenate([grid, [j.at for j in self.jumps], list(self.kinks)]))
        vals = self(pts)
        if abs(self(0.0)) > 0 or abs(self(1.0) - 1.0) > 0:
            raise ValueError("distortion must satisfy h(0)=0 and h(1)=1")
        if np.any(np.diff(vals) < -1e-12) or np.any(vals < -1e-12) or np.any(vals > 1 + 1e-12):
            raise ValueError(f"{self.family}: distortion is not increasing into [0, 1]")
        for j in self.jumps:
            if not (j.left - 1e-12 <= j.value <= j.right + 1e-12):
                raise ValueError(f"{self.family}: jump at {j.at} has inconsistent one-sided values")


# --- known families -------------------------------------------------------


def identity() -> DistortionFunction:
    return DistortionFunction(lambda x: x, family="Identity", validate=False)


def var_indicator(alpha: float) -> DistortionFunction:
    """``h(x) = 1{x > 1 - alpha}``; at ``alpha = 0`` this is ``1{x = 1}``."""
    _check_alpha(alpha, 0.0, 1.0)
    if alpha == 0.0:
        return DistortionFunction(lambda x: np.zeros_like(x), [Jump(1.0, 0.0, 1.0, 1.0)],
                                  family="VaRIndicator", params={"alpha": 0.0}, validate=False)
    t = 1.0 - alpha
    return DistortionFunction(lambda x: (x > t).astype(float), [Jump(t, 0.0, 0.0, 1.0)],
                              family="VaRIndicator", params={"alpha": alpha}, validate=False)


def right_quantile_indicator(alpha: float) -> DistortionFunction:
    """``h(x) = 1{x >= 1 - alpha}``, the right quantile ``q_alpha^+``."""
    _check_alpha(alpha, 0.0, 1.0, upper_open=True)
    t = 1.0 - alpha
    return DistortionFunction(lambda x: (x >= t).astype(float), [Jump(t, 0.0, 1.0, 1.0)],
                              family="RightQuantileIndicator", params={"alpha": alpha}, validate=False)


def es_ramp(alpha: float) -> DistortionFunction:
    """``h(x) = min(x / (1 - alpha), 1)``."""
    _check_alpha(alpha, 0.0, 1.0, upper_open=True)
    t = 1.0 - alpha
    return DistortionFunction(lambda x: np.minimum(x / t, 1.0), kinks=[t] if alpha > 0 else [],
                              family="ESRamp", params={"alpha": alpha}, validate=False)


def ms_indicator(alpha: float) -> DistortionFunction:
    """``h(x) = 1{x > (1 - alpha)/2}``."""
    _check_alpha(alpha, 0.0, 1.0, upper_open=True)
    t = (1.0 - alpha) / 2.0
    return DistortionFunction(lambda x: (x > t).astype(float), [Jump(t, 0.0, 0.0, 1.0)],
                              family="MSIndicator", params={"alpha": alpha}, validate=False)


def quantile_mix_distortion(alpha: float, c: float) -> DistortionFunction:
    """``h(x) = (1 - c) 1{x = 1 - alpha} + 1{x > 1 - alpha}``."""
    _check_alpha(alpha, 0.0, 1.0, lower_open=True, upper_open=True)
    _check_weight(c)
    t = 1.0 - alpha
    return DistortionFunction(lambda x: (x > t).astype(float), [Jump(t, 0.0, 1.0 - c, 1.0)],
                              family="QuantileMix", params={"alpha": alpha, "c": c}, validate=False)


def endpoint_step(c: float) -> DistortionFunction:
    """``h = 1 - c`` on (0, 1): mixes the essential infimum and supremum."""
    _check_weight(c)
    return DistortionFunction(lambda x: np.full_like(x, 1.0 - c),
                              [Jump(0.0, 0.0, 0.0, 1.0 - c), Jump(1.0, 1.0 - c, 1.0, 1.0)],
                              family="EndpointStep", params={"c": c}, validate=False)


def minmaxvar(alpha: float) -> DistortionFunction:
    """``h(x) = 1 - (1 - x^(1/(1+alpha)))^(1+alpha)``."""
    if not alpha >= 0:
        raise ValueError("minmaxvar requires alpha >= 0")
    a = 1.0 + alpha
    return DistortionFunction(lambda x: 1.0 - (1.0 - np.clip(x, 0, 1) ** (1.0 / a)) ** a,
                              family="MinMaxVar", params={"alpha": alpha})


def spectrum_distortion(delta: DiscreteDistribution) -> DistortionFunction:
    """Distortion of the generalised spectral measure ``sum_u w_u VaR_u``."""
    _check_spectrum(delta)
    locs = 1.0 - delta.atoms
    w = delta.probs

    def fn(x):
        x = np.asarray(x, dtype=float)
        return np.sum(w * (x[..., None] > locs), axis=-1)

    jumps = []
    for t, wt in zip(locs, w):
        below = float(np.sum(w[locs < t]))
        jumps.append(Jump(float(t), below, below, below + float(wt)))
    return DistortionFunction(fn, jumps, family="GenSpectral",
                              params={"atoms": delta.atoms.tolist(), "weights": w.tolist()})


def _check_alpha(alpha, lo, hi, *, lower_open=False, upper_open=False):
    ok = (alpha > lo if lower_open else alpha >= lo) and (alpha < hi if upper_open else alpha <= hi)
    if not (isinstance(alpha, (int, float, np.floating)) and math.isfinite(alpha) and ok):
        lb = "(" if lower_open else "["
        rb = ")" if upper_open else "]"
        raise ValueError(f"level must lie in {lb}{lo}, {hi}{rb}, got {alpha!r}")


def _check_weight(c):
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {c!r}")


def _check_spectrum(delta):
    if not isinstance(delta, DiscreteDistribution):
        raise TypeError("spectrum must be a DiscreteDistribution on (0, 1]")
    if delta.atoms[0] <= 0.0 or delta.atoms[-1] > 1.0:
        raise ValueError("spectrum atoms must lie in (0, 1]")


# --- Choquet engine -------------------------------------------------------


def choquet(d: Distribution, h: DistortionFunction, s: float = 1.0, method: str = "auto") -> float:
    """Distortion risk measure of ``d`` under ``h`` with scale ``s``.

    ``method="auto"`` uses the exact finite sum for laws with finite support
    and adaptive quadrature otherwise; ``"quad"`` forces quadrature.
    """
    if not s > 0:
        raise ValueError("scale must be positive")
    if method not in ("auto", "quad", "closed"):
        raise ValueError(f"unknown method {method!r}")
    dv = as_discrete(d) if method != "quad" else None
    if dv is not None:
        return s * _choquet_discrete(dv, h)
    if method == "closed":
        raise ValueError("closed form needs a law with finite support")
    return s * _choquet_quad(d, h)


def _choquet_discrete(d: DiscreteDistribution, h: DistortionFunction) -> float:
    # g(C_i) - g(C_{i-1}) = h(S_{i-1}) - h(S_i) with S_i = P(X > x_i)
    tail = np.concatenate((np.cumsum(d.probs[::-1])[::-1], [0.0]))
    tail[0] = 1.0
    hs = np.asarray(h.at_survival(tail), dtype=float)
    weights = hs[:-1] - hs[1:]
    return float(np.dot(weights, d.atoms))


def _choquet_quad(d: Distribution, h: DistortionFunction) -> float:
    def hs(x):
        return h.at_survival(d.sf(x))

    splits = set(float(b) for b in d.breakpoints())
    for loc in h.critical_points:
        if 0.0 < loc < 1.0:
            for q in (d.quantile_left(1.0 - loc), d.quantile_right(1.0 - loc)):
                if math.isfinite(q):
                    splits.add(float(q))
    lo, hi = d.lower, d.upper
    if math.isfinite(lo):
        t = lo
    else:
        t = float(d.quantile_left(0.5))
    splits.add(t)
    pts = sorted(p for p in splits if lo <= p <= hi)
    _check_tail_decay(d, hs, t)
    upper_part = _pieces(hs, t, hi, pts)
    lower_part = _pieces(lambda x: 1.0 - hs(x), lo, t, pts) if lo < t else 0.0
    return t + upper_part - lower_part


def _check_tail_decay(d, hs, t):
    # quad can return a finite number for a log-divergent tail; a monotone
    # integrable integrand must satisfy x f(x) -> 0, so compare two far scales
    w = float(d.quantile_left(0.75) - d.quantile_left(0.25)) if not d.is_discrete else 1.0
    w = w if w > 0 else 1.0
    for side, f in ((1.0, hs), (-1.0, lambda x: 1.0 - hs(x))):
        edge = d.upper if side > 0 else d.lower
        if math.isfinite(edge):
            continue
        near, far = (t + side * w * 10.0 ** e for e in (2, 7))
        a, b = abs(near - t) * float(f(near)), abs(far - t) * float(f(far))
        if a > 0 and b > 0.5 * a:
            raise NonIntegrableError("non-integrable under h")


def _pieces(fn, a, b, pts):
    if not a < b:
        return 0.0
    try:
        return _dist._integrate_pieces(fn, a, b, pts)
    except NonIntegrableError:
        raise NonIntegrableError("non-integrable under h") from None


# --- named measures -------------------------------------------------------


def var(d: Distribution, alpha: float) -> float:
    """Value-at-Risk: the left quantile ``inf{x | F(x) >= alpha}``."""
    return float(d.quantile_left(alpha))


def es(d: Distribution, alpha: float) -> float:
    """Expected shortfall: mean of the alpha-tail law."""
    _check_alpha(alpha, 0.0, 1.0, upper_open=True)
    try:
        return float(TailDistribution(d, alpha).mean())
    except NonIntegrableError:
        raise NonIntegrableError("non-integrable tail") from None


def ms(d: Distribution, alpha: float) -> float:
    """Median shortfall: median of the alpha-tail law, i.e. ``VaR_{(1+alpha)/2}``."""
    _check_alpha(alpha, 0.0, 1.0, upper_open=True)
    return var(d, (1.0 + alpha) / 2.0)


def mean(d: Distribution) -> float:
    return float(d.mean())


def quantile_mix(d: Distribution, alpha: float, c: float) -> float:
    """``c q_alpha^- + (1 - c) q_alpha^+``."""
    _check_alpha(alpha, 0.0, 1.0, lower_open=True, upper_open=True)
    _check_weight(c)
    return c * float(d.quantile_left(alpha)) + (1.0 - c) * float(d.quantile_right(alpha))


def endpoint_mix(d: Distribution, c: float) -> float:
    """``c ess inf X + (1 - c) ess sup X`` for bounded laws."""
    _check_weight(c)
    if not (math.isfinite(d.lower) and math.isfinite(d.upper)):
        raise InfiniteQuantileError("infinite endpoint")
    return d.upper + c * (d.lower - d.upper)


def gen_spectral(d: Distribution, delta: DiscreteDistribution) -> float:
    """``sum_u delta(u) VaR_u(d)`` over atoms ``u`` in (0, 1]."""
    _check_spectrum(delta)
    q = np.asarray(d.quantile_left(delta.atoms), dtype=float)
    return float(np.dot(delta.probs, q))


def discretize_spectrum(phi: Callable, grid: int = 2**14, support=(0.0, 1.0)) -> DiscreteDistribution:
    """Midpoint discretisation of a spectrum density ``phi`` on ``support``.

    The resulting weighted quantile sum approximates ``int VaR_u phi(u) du``
    with error ``O(1/grid)`` for laws with bounded quantile derivative on the
    interior; the endpoint itself is never an atom.
    """
    a, b = support
    if not 0.0 <= a < b <= 1.0 or grid < 1:
        raise ValueError("need 0 <= a < b <= 1 and grid >= 1")
    u = a + (np.arange(grid) + 0.5) * (b - a) / grid
    w = np.asarray(phi(u), dtype=float) * np.ones_like(u)
    if np.any(w < 0) or not w.sum() > 0:
        raise ValueError("spectrum density must be nonnegative and not identically zero")
    keep = w > 0
    return DiscreteDistribution(u[keep], w[keep] / w[keep].sum())


# --- textual specs --------------------------------------------------------

_KINDS = ("var", "es", "ms", "mean", "qmix", "emix", "minmaxvar", "gspec")


@dataclass(frozen=True)
class RiskMeasureSpec:
    """A named risk measure with its parameters and scale.

    Text form: ``name[@alpha][:key=value,...]``, for example ``var@0.99``,
    ``es@0.975:scale=2``, ``qmix@0.95:c=0.5``, ``emix:c=0.25``,
    ``minmaxvar:alpha=0.25`` and ``gspec:0.9=0.5,0.99=0.5``.
    """

    kind: str
    alpha: float | None = None
    c: float | None = None
    scale: float = 1.0
    spectrum: DiscreteDistribution | None = field(default=None, compare=False)

    def __post_init__(self):
        k = self.kind
        if k not in _KINDS:
            raise ConfigError(f"unknown risk measure {k!r}")
        if not self.scale > 0:
            raise ConfigError("scale must be positive")
        needs_alpha = k in ("var", "es", "ms", "qmix", "minmaxvar")
        if needs_alpha and self.alpha is None:
            raise ConfigError(f"{k} needs a level")
        if not needs_alpha and self.alpha is not None:
            raise ConfigError(f"{k} takes no level")
        if k in ("qmix", "emix") and self.c is None:
            raise ConfigError(f"{k} needs c=")
        if k not in ("qmix", "emix") and self.c is not None:
            raise ConfigError(f"{k} takes no c=")
        if (k == "gspec") != (self.spectrum is not None):
            raise ConfigError("gspec needs a spectrum and only gspec takes one")
        try:
            self.distortion()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def distortion(self) -> DistortionFunction:
        k, a = self.kind, self.alpha
        if k == "var":
            return var_indicator(a)
        if k == "es":
            return es_ramp(a)
        if k == "ms":
            return ms_indicator(a)
        if k == "mean":
            return identity()
        if k == "qmix":
            return quantile_mix_distortion(a, self.c)
        if k == "emix":
            return endpoint_step(self.c)
        if k == "minmaxvar":
            return minmaxvar(a)
        return spectrum_distortion(self.spectrum)

    def evaluate(self, d: Distribution) -> float:
        k, a = self.kind, self.alpha
        if k == "var":
            v = var(d, a)
        elif k == "es":
            v = es(d, a)
        elif k == "ms":
            v = ms(d, a)
        elif k == "mean":
            v = mean(d)
        elif k == "qmix":
            v = quantile_mix(d, a, self.c)
        elif k == "emix":
            v = endpoint_mix(d, self.c)
        elif k == "gspec":
            v = gen_spectral(d, self.spectrum)
        else:
            v = choquet(d, self.distortion())
        return self.scale * v

    __call__ = evaluate

    @classmethod
    def parse(cls, text: str) -> "RiskMeasureSpec":
        head, _, tail = text.strip().partition(":")
        name, at, level = head.strip().lower().partition("@")
        kw: dict = {}
        try:
            if at:
                kw["alpha"] = float(level)
            spectrum = []
            for item in filter(None, (p.strip() for p in tail.split(","))):
                key, eq, val = item.partition("=")
                if not eq:
                    raise ConfigError(f"expected key=value, got {item!r}")
                key = key.strip().lower()
                if name == "gspec":
                    spectrum.append((float(key), float(val)))
                elif key in ("alpha", "c", "scale"):
                    if key in kw:
                        raise ConfigError(f"duplicate key {key!r}")
                    kw[key] = float(val)
                else:
                    raise ConfigError(f"unknown key {key!r} for {name}")
            if name == "gspec":
                if not spectrum:
                    raise ConfigError("gspec needs u=w pairs")
                kw["spectrum"] = DiscreteDistribution.from_pairs(spectrum)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"cannot parse risk measure {text!r}: {exc}") from None
        return cls(name, **kw)

    def __str__(self):
        k = self.kind
        opts = []
        head = k
        if k == "minmaxvar":
            opts.append(f"alpha={self.alpha!r}")
        elif self.alpha is not None:
            head = f"{k}@{self.alpha!r}"
        if self.c is not None:
            opts.append(f"c={self.c!r}")
        if k == "gspec":
            opts.extend(f"{u!r}={w!r}" for u, w in zip(self.spectrum.atoms.tolist(), self.spectrum.probs.tolist()))
        if self.scale != 1.0:
            opts.append(f"scale={self.scale!r}")
        return head + (":" + ",".join(opts) if opts else "")


def parse_measure(text: str) -> RiskMeasureSpec:
    return RiskMeasureSpec.parse(text)
