"""IGARCH(1,1) filtering, fitting and one-day tail-risk forecasts.

Returns follow ``r_t = mu + sigma_t eps_t`` with
``sigma_t^2 = beta sigma_{t-1}^2 + (1 - beta) r_{t-1}^2``. Model 1 uses
Gaussian ``eps``; model 2 uses Student t. By default the t innovation is
the raw ``t_nu`` variable, so ``sigma_t`` is a scale rather than a
standard deviation; ``standardized=True`` rescales it to unit variance.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize, special

from .dist import Distribution, Normal, StudentT, point_mass
from .errors import FitError, NonIntegrableError
from .measures import es as _es, ms as _ms, var as _var

GAUSSIAN = "gaussian"
STUDENT_T = "t"
INIT_WINDOW = 50
MIN_LENGTH = 250
TABLE_ALPHAS = (0.97, 0.975, 0.98, 0.985, 0.99, 0.995)


@dataclass(frozen=True)
class IGARCHModel:
    mu: float
    beta: float
    sigma0_sq: float
    innovation: str = GAUSSIAN
    nu: float | None = None
    standardized: bool = False
    loglik: float | None = None

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if not self.sigma0_sq > 0:
            raise ValueError("sigma0_sq must be positive")
        if self.innovation not in (GAUSSIAN, STUDENT_T):
            raise ValueError(f"innovation must be {GAUSSIAN!r} or {STUDENT_T!r}")
        if self.innovation == STUDENT_T:
            if self.nu is None or not self.nu > (2.0 if self.standardized else 0.0):
                raise ValueError("Student t innovation needs nu > 0 (nu > 2 when standardized)")

    def innovation_scale(self) -> float:
        """Factor turning ``sigma_t`` into the scale of the innovation law."""
        if self.innovation == STUDENT_T and self.standardized:
            return math.sqrt((self.nu - 2.0) / self.nu)
        return 1.0


def filter_volatility(m: IGARCHModel, returns) -> np.ndarray:
    """Conditional variances ``sigma_0^2 .. sigma_T^2`` (length ``T + 1``)."""
    r = np.asarray(returns, dtype=float).ravel()
    if r.size == 0:
        raise ValueError("returns must be nonempty")
    return _recursion(m.beta, m.sigma0_sq, r)


def _recursion(beta, s0, r, omega=0.0):
    out = np.empty(r.size + 1)
    out[0] = s0
    a = 1.0 - beta
    prev = s0
    for t in range(r.size):
        prev = omega + beta * prev + a * r[t] * r[t]
        out[t + 1] = prev
    return out


def _loglik(mu, beta, nu, r, s0, innovation, standardized):
    sig2 = _recursion(beta, s0, r)[:-1]
    if innovation == GAUSSIAN:
        z2 = (r - mu) ** 2 / sig2
        return float(-0.5 * np.sum(np.log(2 * np.pi * sig2) + z2))
    scale2 = sig2 * ((nu - 2.0) / nu if standardized else 1.0)
    z2 = (r - mu) ** 2 / scale2
    const = special.gammaln((nu + 1) / 2) - special.gammaln(nu / 2) - 0.5 * math.log(nu * math.pi)
    return float(np.sum(const - 0.5 * np.log(scale2) - (nu + 1) / 2 * np.log1p(z2 / nu)))


def loglik(m: IGARCHModel, returns) -> float:
    """Conditional log-likelihood given ``sigma0_sq``."""
    r = np.asarray(returns, dtype=float).ravel()
    return _loglik(m.mu, m.beta, m.nu, r, m.sigma0_sq, m.innovation, m.standardized)


def initial_variance(returns) -> float:
    r = np.asarray(returns, dtype=float).ravel()
    return float(np.var(r[:INIT_WINDOW], ddof=1))


def fit_igarch(returns, innovation: str = GAUSSIAN, standardized: bool = False,
               restarts: int = 3) -> IGARCHModel:
    """Maximum conditional likelihood over ``(mu, beta[, nu])``.

    L-BFGS-B from ``restarts`` fixed starting points; ``sigma0_sq`` is the
    sample variance of the first 50 returns.
    """
    r = np.asarray(returns, dtype=float).ravel()
    if r.size < MIN_LENGTH:
        raise ValueError(f"need at least {MIN_LENGTH} returns, got {r.size}")
    if not np.all(np.isfinite(r)):
        raise ValueError("returns must be finite")
    sd = float(np.std(r))
    s0 = initial_variance(r)
    if not sd > 0 or not s0 > 0:
        raise ValueError("degenerate series: zero variance")
    mean = float(np.mean(r))
    is_t = innovation == STUDENT_T
    nu_lo = 2.05 if (is_t and standardized) else 1.05

    # optimise over (mu / sd, beta[, nu]) so every coordinate is O(1)
    def negll(p):
        nu = p[2] if is_t else None
        return -_loglik(p[0] * sd, p[1], nu, r, s0, innovation, standardized) / r.size

    bounds = [(-5.0, 5.0), (1e-4, 1.0 - 1e-6)] + ([(nu_lo, 200.0)] if is_t else [])
    starts = [(0.94, 8.0), (0.85, 5.0), (0.98, 15.0)][: max(1, restarts)]
    best = None
    for b0, nu0 in starts:
        x0 = [mean / sd, b0] + ([nu0] if is_t else [])
        res = optimize.minimize(negll, x0, method="L-BFGS-B", bounds=bounds,
                                options={"ftol": 1e-14, "gtol": 1e-9, "maxiter": 2000})
        if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
            best = res
    if best is None or not best.success and not _is_acceptable(best):
        raise FitError("likelihood maximisation did not converge after restarts",
                       best=None if best is None else best.x)
    p = best.x
    return IGARCHModel(mu=float(p[0] * sd), beta=float(p[1]), sigma0_sq=s0, innovation=innovation,
                       nu=float(p[2]) if is_t else None, standardized=standardized,
                       loglik=float(-best.fun * r.size))


def _is_acceptable(res):
    # an ABNORMAL line-search stop after real progress sits at a flat optimum
    return np.isfinite(res.fun) and "ABNORMAL" in str(res.message) and res.nit > 0


def simulate_igarch(m: IGARCHModel, T: int, seed: int, omega: float = 0.0) -> np.ndarray:
    """Simulate ``T`` returns from ``m``; ``omega > 0`` adds a variance floor.

    With ``omega = 0`` Gaussian paths shrink towards zero variance over long
    horizons and raw-t paths can explode; a small ``omega`` gives a
    strictly stationary process.
    """
    rng = np.random.default_rng(seed)
    if m.innovation == GAUSSIAN:
        eps = rng.standard_normal(T)
    else:
        eps = rng.standard_t(m.nu, T) * m.innovation_scale()
    r = np.empty(T)
    s2 = m.sigma0_sq
    a = 1.0 - m.beta
    for t in range(T):
        r[t] = m.mu + math.sqrt(s2) * eps[t]
        s2 = omega + m.beta * s2 + a * r[t] * r[t]
    return r


# --------------------------------------------------------------------------
# Forecasts
# --------------------------------------------------------------------------


def predictive_loss_distribution(m: IGARCHModel, sigma_next_sq: float, notional: float = 1.0) -> Distribution:
    """Law of ``L = -notional * r_next`` given the next-day variance."""
    if not notional > 0:
        raise ValueError("notional must be positive")
    if sigma_next_sq < 0:
        raise ValueError("variance must be nonnegative")
    loc = -notional * m.mu
    scale = notional * math.sqrt(sigma_next_sq) * m.innovation_scale()
    if scale == 0.0:
        return point_mass(loc)
    if m.innovation == GAUSSIAN:
        return Normal(loc, scale)
    return StudentT(m.nu, loc, scale)


@dataclass(frozen=True)
class TailForecast:
    alpha: float
    var: float
    es: float
    ms: float


def forecast_tail_risk(m: IGARCHModel, sigma_next_sq: float, notional: float = 1.0,
                       alphas: Sequence[float] = TABLE_ALPHAS) -> list[TailForecast]:
    """One-day VaR, ES and MS of the loss ``-notional * r_next`` at each level."""
    law = predictive_loss_distribution(m, sigma_next_sq, notional)
    out = []
    for a in alphas:
        if not 0.0 < a < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        try:
            e = _es(law, a)
        except NonIntegrableError:
            raise NonIntegrableError(f"ES undefined for nu={m.nu} <= 1") from None
        out.append(TailForecast(float(a), _var(law, a), e, _ms(law, a)))
    return out


@dataclass(frozen=True)
class ForecastRow:
    """One line of the model comparison: ES and MS under both models."""

    alpha: float
    es1: float
    es2: float
    ms1: float
    ms2: float

    @property
    def es_diff(self) -> float:
        return self.es2 - self.es1

    @property
    def ms_diff(self) -> float:
        return self.ms2 - self.ms1

    @property
    def ratio(self) -> float:
        """``ES_diff / MS_diff - 1``."""
        return self.es_diff / self.ms_diff - 1.0

    def as_tuple(self):
        return (self.alpha, self.es1, self.es2, self.es_diff, self.ms1, self.ms2, self.ms_diff, self.ratio)


TABLE_HEADER = ("alpha", "ES1", "ES2", "ES_diff", "MS1", "MS2", "MS_diff", "ratio")


@dataclass(frozen=True)
class ComparisonResult:
    rows: tuple
    model1: IGARCHModel
    model2: IGARCHModel
    sigma1_next_sq: float
    sigma2_next_sq: float


def model_comparison(returns, notional: float = 1_000_000.0, alphas: Sequence[float] = TABLE_ALPHAS,
                     standardized: bool = False) -> ComparisonResult:
    """Fit the Gaussian and Student-t models and tabulate their forecasts."""
    if len(alphas) == 0:
        raise ValueError("alpha list must be nonempty")
    r = np.asarray(returns, dtype=float).ravel()
    m1 = fit_igarch(r, GAUSSIAN)
    m2 = fit_igarch(r, STUDENT_T, standardized=standardized)
    s1 = float(filter_volatility(m1, r)[-1])
    s2 = float(filter_volatility(m2, r)[-1])
    f1 = forecast_tail_risk(m1, s1, notional, alphas)
    f2 = forecast_tail_risk(m2, s2, notional, alphas)
    rows = tuple(ForecastRow(a.alpha, a.es, b.es, a.ms, b.ms) for a, b in zip(f1, f2))
    return ComparisonResult(rows, m1, m2, s1, s2)


def model_comparison_table(returns, notional: float = 1_000_000.0, alphas: Sequence[float] = TABLE_ALPHAS,
                           standardized: bool = False) -> list[ForecastRow]:
    return list(model_comparison(returns, notional, alphas, standardized).rows)


def write_table_csv(rows, path_or_file, header_lines=()):
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        for line in header_lines:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(TABLE_HEADER)
        for row in rows:
            w.writerow([f"{v:.10g}" for v in row.as_tuple()])
    finally:
        if own:
            fh.close()


def format_table(rows) -> str:
    """Fixed-width text rendering with the ratio as a percentage."""
    lines = ["  alpha      ES1      ES2  ES_diff      MS1      MS2  MS_diff    ratio"]
    for r in rows:
        lines.append(f"{100 * r.alpha:6.1f}% {r.es1:8.0f} {r.es2:8.0f} {r.es_diff:8.0f} "
                     f"{r.ms1:8.0f} {r.ms2:8.0f} {r.ms_diff:8.0f} {100 * r.ratio:7.1f}%")
    return "\n".join(lines)


def returns_from_prices(prices, kind: str = "log") -> np.ndarray:
    p = np.asarray(prices, dtype=float).ravel()
    if p.size < 2 or np.any(~(p > 0)):
        raise ValueError("need at least two positive prices")
    if kind == "log":
        return np.diff(np.log(p))
    if kind == "simple":
        return p[1:] / p[:-1] - 1.0
    raise ValueError("kind must be 'log' or 'simple'")
