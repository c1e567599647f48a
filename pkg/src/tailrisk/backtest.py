"""Exceedance-based and score-based backtests.

Exceedance tests look only at the hit sequence ``I_t = 1{L_t > VaR_t}``,
which under a correct model is i.i.d. Bernoulli(1 - alpha). Score-based
tests compare average forecast scores of a model against a benchmark.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special, stats

ZONE_YELLOW = 0.95
ZONE_RED = 0.9999


@dataclass(frozen=True)
class ExceedanceSeries:
    """Hit indicators of a VaR forecast series at level ``alpha``."""

    indicators: np.ndarray
    alpha: float

    def __post_init__(self):
        ind = np.asarray(self.indicators)
        if ind.ndim != 1 or ind.size < 1:
            raise ValueError("need a 1-D series with T >= 1")
        if not np.all((ind == 0) | (ind == 1)):
            raise ValueError("indicators must be 0 or 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        ind = ind.astype(np.int8)
        ind.flags.writeable = False
        object.__setattr__(self, "indicators", ind)

    @property
    def T(self) -> int:
        return int(self.indicators.size)

    @property
    def N(self) -> int:
        return int(self.indicators.sum())

    @classmethod
    def from_counts(cls, T: int, N: int, alpha: float) -> "ExceedanceSeries":
        """Series with ``N`` hits at the end; for tests that use counts only."""
        if not 0 <= N <= T:
            raise ValueError("need 0 <= N <= T")
        ind = np.zeros(T, dtype=np.int8)
        ind[T - N:] = 1
        return cls(ind, alpha)


@dataclass(frozen=True)
class BacktestReport:
    test: str
    statistic: float
    p_value: float
    size: float
    reject: bool
    zone: str | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def to_line(self) -> str:
        zone = self.zone if self.zone is not None else "-"
        return f"test={self.test} stat={self.statistic:.10g} p={self.p_value:.10g} zone={zone}"


def write_reports_csv(reports, path_or_file):
    """CSV with columns ``test,statistic,p_value,size,reject,zone``."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(["test", "statistic", "p_value", "size", "reject", "zone"])
        for r in reports:
            w.writerow([r.test, f"{r.statistic:.12g}", f"{r.p_value:.12g}", r.size,
                        int(r.reject), r.zone or ""])
    finally:
        if own:
            fh.close()


def exceedances(losses, var_forecasts, alpha: float) -> ExceedanceSeries:
    """``1{L_t > VaR_t}`` with strict inequality."""
    L = np.asarray(losses, dtype=float).ravel()
    v = np.asarray(var_forecasts, dtype=float).ravel()
    if L.size != v.size:
        raise ValueError("losses and forecasts differ in length")
    return ExceedanceSeries((L > v).astype(np.int8), alpha)


def kupiec_lr(T: int, N: int, alpha: float) -> float:
    """Proportion-of-failures likelihood ratio with ``0 ln 0 = 0``."""
    p = 1.0 - alpha
    null = special.xlogy(T - N, 1.0 - p) + special.xlogy(N, p)
    phat = N / T
    alt = special.xlogy(T - N, 1.0 - phat) + special.xlogy(N, phat)
    lr = -2.0 * null + 2.0 * alt
    return float(lr) if lr > 0 else 0.0


def kupiec_pof(e: ExceedanceSeries, size: float = 0.05) -> BacktestReport:
    """Unconditional coverage test; chi-square(1) reference law."""
    lr = kupiec_lr(e.T, e.N, e.alpha)
    p = float(stats.chi2.sf(lr, 1))
    return BacktestReport("kupiec", lr, p, size, p < size, extra={"T": e.T, "N": e.N})


def traffic_light(e: ExceedanceSeries) -> BacktestReport:
    """Basel traffic-light zone from the binomial CDF of the hit count.

    Green while ``P(N' <= N) < 0.95``, yellow while below 0.9999, red
    otherwise. The reported p-value is ``P(N' >= N)``; red corresponds to
    ``p <= 1e-4`` up to the discreteness of the count.
    """
    p0 = 1.0 - e.alpha
    cum = float(stats.binom.cdf(e.N, e.T, p0))
    zone = "green" if cum < ZONE_YELLOW else "yellow" if cum < ZONE_RED else "red"
    p = float(stats.binom.sf(e.N - 1, e.T, p0))
    return BacktestReport("traffic_light", cum, p, 1.0 - ZONE_RED, zone == "red", zone,
                          extra={"T": e.T, "N": e.N})


def _transition_counts(ind):
    a, b = ind[:-1], ind[1:]
    n00 = int(np.sum((a == 0) & (b == 0)))
    n01 = int(np.sum((a == 0) & (b == 1)))
    n10 = int(np.sum((a == 1) & (b == 0)))
    n11 = int(np.sum((a == 1) & (b == 1)))
    return n00, n01, n10, n11


def _independence_lr(n00, n01, n10, n11):
    pi = (n01 + n11) / (n00 + n01 + n10 + n11)
    pi01 = n01 / (n00 + n01) if n00 + n01 else 0.0
    pi11 = n11 / (n10 + n11) if n10 + n11 else 0.0
    null = special.xlogy(n00 + n10, 1 - pi) + special.xlogy(n01 + n11, pi)
    alt = (special.xlogy(n00, 1 - pi01) + special.xlogy(n01, pi01)
           + special.xlogy(n10, 1 - pi11) + special.xlogy(n11, pi11))
    lr = -2.0 * (null - alt)
    return float(lr) if lr > 0 else 0.0


def christoffersen_independence(e: ExceedanceSeries, size: float = 0.05) -> BacktestReport:
    """First-order Markov independence test; chi-square(1)."""
    if e.T < 2:
        raise ValueError("independence test needs T >= 2")
    counts = _transition_counts(e.indicators)
    lr = _independence_lr(*counts)
    p = float(stats.chi2.sf(lr, 1))
    return BacktestReport("christoffersen_ind", lr, p, size, p < size,
                          extra=dict(zip(("n00", "n01", "n10", "n11"), counts)))


def christoffersen_cc(e: ExceedanceSeries, size: float = 0.05) -> BacktestReport:
    """Conditional coverage: POF plus independence statistics, chi-square(2)."""
    ind = christoffersen_independence(e, size)
    pof = kupiec_lr(e.T, e.N, e.alpha)
    lr = pof + ind.statistic
    p = float(stats.chi2.sf(lr, 2))
    extra = dict(ind.extra, lr_pof=pof, lr_ind=ind.statistic, p_ind=ind.p_value)
    return BacktestReport("christoffersen_cc", lr, p, size, p < size, extra=extra)


def long_run_variance(x, lags: int | None = None) -> float:
    """Bartlett-weighted long-run variance; default window ``floor(T^(1/3))``."""
    x = np.asarray(x, dtype=float)
    T = x.size
    L = int(math.floor(T ** (1.0 / 3.0))) if lags is None else int(lags)
    c = x - x.mean()
    v = float(np.dot(c, c) / T)
    for lag in range(1, min(L, T - 1) + 1):
        v += 2.0 * (1.0 - lag / (L + 1.0)) * float(np.dot(c[lag:], c[:-lag]) / T)
    return v


MODEL_WORSE = "model-worse"
MODEL_BETTER = "model-better"


def comparative_score_backtest(model_scores, benchmark_scores, side: str = MODEL_WORSE,
                               size: float = 0.05) -> BacktestReport:
    """Studentised mean score difference ``d = model - benchmark``.

    ``side="model-worse"`` tests H0: the model's expected score is at least
    the benchmark's; rejecting it means the model is judged better. The
    ``"model-better"`` side is the mirror image.
    """
    m = np.asarray(model_scores, dtype=float).ravel()
    b = np.asarray(benchmark_scores, dtype=float).ravel()
    if m.size != b.size:
        raise ValueError("score series differ in length")
    if m.size < 30:
        raise ValueError("comparative backtest needs T >= 30")
    if side not in (MODEL_WORSE, MODEL_BETTER):
        raise ValueError(f"side must be {MODEL_WORSE!r} or {MODEL_BETTER!r}")
    d = m - b
    dbar = float(d.mean())
    var = long_run_variance(d)
    if not var > 0:
        # degenerate: only the sign of the mean difference is informative
        t = 0.0 if dbar == 0 else math.copysign(math.inf, dbar)
    else:
        t = dbar / math.sqrt(var / d.size)
    p_worse = float(stats.norm.cdf(t))
    p_better = float(stats.norm.sf(t))
    p = p_worse if side == MODEL_WORSE else p_better
    name = "score_" + side.replace("-", "_")
    return BacktestReport(name, t, p, size, p < size,
                          extra={"mean_diff": dbar, "lrv": var, "p_model_worse": p_worse,
                                 "p_model_better": p_better, "T": int(d.size)})
