"""Scoring functions, expected-score minimisation and level-set checks.

A functional is elicitable when it is the minimiser of an expected score.
Quantiles are (pinball loss), the mean is (squared error), and the pair
(VaR, ES) is jointly, but ES on its own is not. This module computes the
objects needed to see this numerically: expected scores by exact sums,
closed forms, quadrature or Monte Carlo; grid-and-refine minimisation;
and randomised searches for pairs of laws that break convexity of the
level sets of a risk measure.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy import integrate, optimize, special, stats

from .dist import DiscreteDistribution, Distribution, Normal, as_discrete, mixture
from .errors import BracketError, NonIntegrableError
from .measures import RiskMeasureSpec, es as _es, var as _var

_EPS = np.finfo(float).eps


# --------------------------------------------------------------------------
# Scoring functions
# --------------------------------------------------------------------------


class ScoringFunction:
    """Base class; ``arity`` is 1 for scalar forecasts and 2 for pairs."""

    arity = 1
    name = "score"

    def __call__(self, forecast, y):
        return self.score(forecast, y)

    def score(self, forecast, y):
        raise NotImplementedError

    def closed_expected(self, forecast, d: Distribution) -> float:
        raise NotImplementedError(f"{self.name} has no closed-form expected score")

    def check_forecast(self, forecast):
        """Raise ``ValueError`` unless ``forecast`` has this score's arity."""
        f = np.asarray(forecast, dtype=float)
        if self.arity == 1 and f.ndim != 0:
            raise ValueError(f"{self.name} takes a scalar forecast")
        if self.arity == 2 and f.shape != (2,):
            raise ValueError(f"{self.name} takes a (VaR, ES) pair forecast")


def _odd_root(n: int) -> Callable:
    if n < 0 or int(n) != n:
        raise ValueError("odd-root order n must be a nonnegative integer")
    k = 2 * int(n) + 1
    if k == 3:
        return np.cbrt
    return lambda x: np.sign(x) * np.abs(x) ** (1.0 / k)


class QuantileScore(ScoringFunction):
    """Generalised pinball loss ``(1{x >= y} - alpha) (g(x) - g(y))``.

    ``g`` is ``"identity"``, ``"cbrt"``, ``("odd_root", n)`` for the
    ``(2n+1)``-th root, or any strictly increasing callable.
    """

    def __init__(self, alpha: float, g="identity"):
        if not 0.0 < alpha < 1.0:
            raise ValueError("QuantileScore needs alpha in (0, 1)")
        self.alpha = float(alpha)
        if g == "identity":
            self.g, self.g_name = (lambda x: x), "identity"
        elif g == "cbrt":
            self.g, self.g_name = np.cbrt, "cbrt"
        elif isinstance(g, tuple) and g[0] == "odd_root":
            self.g, self.g_name = _odd_root(g[1]), f"odd_root({g[1]})"
        elif callable(g):
            self.g, self.g_name = g, getattr(g, "__name__", "custom")
        else:
            raise ValueError(f"unknown g {g!r}")
        self.name = f"QuantileScore({self.alpha}, {self.g_name})"

    def __repr__(self):
        return self.name

    def score(self, forecast, y):
        x = np.asarray(forecast, dtype=float)
        y = np.asarray(y, dtype=float)
        return ((x >= y) - self.alpha) * (self.g(x) - self.g(y))

    def closed_expected(self, forecast, d):
        if self.g_name != "identity":
            return super().closed_expected(forecast, d)
        x = float(forecast)
        return d.stop_loss(x) + (1.0 - self.alpha) * (x - d.mean())


class SquaredError(ScoringFunction):
    name = "SquaredError"

    def __repr__(self):
        return self.name

    def score(self, forecast, y):
        return (np.asarray(forecast, dtype=float) - np.asarray(y, dtype=float)) ** 2

    def closed_expected(self, forecast, d):
        return (float(forecast) - d.mean()) ** 2 + d.variance()


class AbsoluteError(ScoringFunction):
    name = "AbsoluteError"

    def __repr__(self):
        return self.name

    def score(self, forecast, y):
        return np.abs(np.asarray(forecast, dtype=float) - np.asarray(y, dtype=float))

    def closed_expected(self, forecast, d):
        x = float(forecast)
        return 2.0 * d.stop_loss(x) + x - d.mean()


def _softplus(x):
    return np.logaddexp(0.0, x)


_PRESETS = {
    "exp": (lambda x: x, np.exp, np.exp),
    "logistic": (lambda x: x, special.expit, _softplus),
}


class JointVarEs(ScoringFunction):
    """Joint score for the pair (VaR_alpha, ES_alpha).

    ``S(x1, x2, y) = (1{x1 >= y} - alpha)(G1(-y) - G1(-x1))
    + G2(-x2) [1{x1 < y}(y - x1)/(1 - alpha) + x1 - x2] - GG2(-x2)``
    with ``GG2' = G2``. Presets: ``"exp"`` (G2 = GG2 = exp) and
    ``"logistic"`` (G2 = expit, GG2 = softplus); both take G1 = identity.
    """

    arity = 2

    def __init__(self, alpha: float, preset: str = "logistic", G1=None, G2=None, GG2=None):
        if not 0.0 < alpha < 1.0:
            raise ValueError("JointVarEs needs alpha in (0, 1)")
        self.alpha = float(alpha)
        if preset == "custom":
            if G1 is None or G2 is None or GG2 is None:
                raise ValueError("custom JointVarEs needs G1, G2 and GG2")
            self.G1, self.G2, self.GG2 = G1, G2, GG2
        elif preset in _PRESETS:
            self.G1, self.G2, self.GG2 = _PRESETS[preset]
        else:
            raise ValueError(f"unknown preset {preset!r}")
        self.preset = preset
        self._validate()
        self.name = f"JointVarEs({self.alpha}, {preset})"

    def __repr__(self):
        return self.name

    def _validate(self):
        if not abs(self.G2(-50.0)) < 1e-12:
            raise ValueError("G2 must vanish at -infinity (|G2(-50)| < 1e-12)")
        grid = np.linspace(-30.0, 30.0, 601)
        for fn, label in ((self.G1, "G1"), (self.G2, "G2")):
            if np.any(np.diff(fn(grid)) <= 0):
                raise ValueError(f"{label} must be strictly increasing")

    def score(self, forecast, y):
        f = np.asarray(forecast, dtype=float)
        x1, x2 = f[..., 0], f[..., 1]
        y = np.asarray(y, dtype=float)
        a = self.alpha
        g2 = self.G2(-x2)
        pin = ((x1 >= y) - a) * (self.G1(-y) - self.G1(-x1))
        exceed = np.where(x1 < y, y - x1, 0.0)
        return pin + g2 * (exceed / (1.0 - a) + x1 - x2) - self.GG2(-x2)

    def closed_expected(self, forecast, d):
        if self.preset == "custom":
            return super().closed_expected(forecast, d)
        x1, x2 = (float(v) for v in forecast)
        a = self.alpha
        sl = d.stop_loss(x1)
        pin = sl + (1.0 - a) * (x1 - d.mean())
        return pin + self.G2(-x2) * (sl / (1.0 - a) + x1 - x2) - self.GG2(-x2)


def score(s: ScoringFunction, forecast, realized):
    """Score of ``forecast`` against the realised loss(es)."""
    s.check_forecast(forecast)
    out = s.score(forecast, realized)
    return float(out) if np.ndim(out) == 0 else out


# --------------------------------------------------------------------------
# Expected scores
# --------------------------------------------------------------------------


def expected_score(s: ScoringFunction, forecast, d: Distribution, method: str = "auto",
                   n: int = 10**6, seed: int = 0) -> float:
    """``E S(forecast, Y)`` for ``Y ~ d``.

    Methods: ``"auto"`` (exact sum for finite laws, else closed form when
    known, else quadrature), ``"closed"``, ``"quadrature"``, ``"exact"``
    and ``"montecarlo"`` (``n`` draws from ``seed``).
    """
    s.check_forecast(forecast)
    if method == "montecarlo":
        return monte_carlo_score(s, forecast, d, n, seed)[0]
    dv = as_discrete(d)
    if dv is not None and method in ("auto", "exact", "quadrature", "closed"):
        return float(np.dot(dv.probs, s.score(forecast, dv.atoms)))
    if method == "exact":
        raise ValueError("exact expected score needs a law with finite support")
    try:
        if method == "closed" or (method == "auto" and _has_closed(s, d)):
            return float(s.closed_expected(forecast, d))
        if method in ("auto", "quadrature"):
            return _quad_expected(s, forecast, d)
    except NonIntegrableError:
        raise NonIntegrableError("non-integrable score") from None
    raise ValueError(f"unknown method {method!r}")


def _has_closed(s, d):
    try:
        s.closed_expected(np.zeros(s.arity) if s.arity == 2 else 0.0, d)
    except NotImplementedError:
        return False
    except Exception:
        return True
    return True


def _quad_expected(s, forecast, d):
    cuts = [float(v) for v in np.ravel(forecast)]

    def run(fn, lo, hi, pts):
        pts = sorted(p for p in pts if lo < p < hi)
        edges = [lo, *pts, hi]
        total = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            for a, b in zip(edges[:-1], edges[1:]):
                try:
                    val, _ = integrate.quad(fn, a, b, epsabs=1e-13, epsrel=1e-10, limit=500)
                except integrate.IntegrationWarning:
                    raise NonIntegrableError("non-integrable score") from None
                total += val
        if not math.isfinite(total):
            raise NonIntegrableError("non-integrable score")
        return total

    if hasattr(d, "pdf") and d.breakpoints().size == 0:
        fn = lambda y: float(s.score(forecast, y) * d.pdf(y))
        return run(fn, d.lower, d.upper, cuts)
    # quantile substitution handles atoms: E phi(Y) = int_0^1 phi(q(u)) du
    fn = lambda u: float(s.score(forecast, d.quantile_left(u)))
    ucuts = [float(d.cdf(c)) for c in cuts]
    for b in d.breakpoints():
        ucuts += [float(d.cdf(b)), float(d.cdf(np.nextafter(b, -np.inf)))]
    return run(fn, 0.0, 1.0, ucuts)


def monte_carlo_score(s: ScoringFunction, forecast, d: Distribution, n: int = 10**6,
                      seed: int = 0, batches: int = 20, sample=None) -> tuple[float, float]:
    """Monte-Carlo mean score and its batch-means standard error."""
    y = d.sample(n, seed) if sample is None else np.asarray(sample, dtype=float)
    vals = np.asarray(s.score(forecast, y), dtype=float)
    return _batch_means(vals, batches)


def _batch_means(vals, batches=20):
    m = vals.size // batches
    if m < 1:
        raise ValueError("need at least one draw per batch")
    means = vals[: m * batches].reshape(batches, m).mean(axis=1)
    return float(vals.mean()), float(means.std(ddof=1) / math.sqrt(batches))


def _expected_many(s, xs, d, method="auto"):
    dv = as_discrete(d)
    if dv is not None and method != "montecarlo":
        return s.score(np.asarray(xs)[:, None], dv.atoms[None, :]) @ dv.probs
    return np.array([expected_score(s, float(x), d, method) for x in xs])


# --------------------------------------------------------------------------
# Minimisation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ArgminResult:
    """Minimising set ``[lo, hi]`` of an expected score and its minimum.

    ``rho`` is the smallest minimiser, the value the functional reports.
    """

    lo: float
    hi: float
    value: float

    @property
    def rho(self) -> float:
        return self.lo

    @property
    def interval(self) -> tuple[float, float]:
        return self.lo, self.hi


def default_bracket(d: Distribution) -> tuple[float, float]:
    """Search interval padded around the bulk of ``d``."""
    lo = d.lower if math.isfinite(d.lower) else float(d.quantile_left(1e-9))
    hi = d.upper if math.isfinite(d.upper) else float(d.quantile_left(1 - 1e-9))
    pad = 0.1 * (hi - lo) + 1.0
    return lo - pad, hi + pad


def minimize_expected_score(s: ScoringFunction, d: Distribution, bounds=None, grid: int = 2001,
                            resolution: float = 1e-6, method: str = "auto") -> ArgminResult:
    """Minimise ``x -> E S(x, Y)`` over ``bounds``.

    A coarse grid locates the near-optimal set; a bounded scalar search
    refines one minimiser and bisection pushes out to both ends of the flat
    minimising interval. Intervals narrower than ``2 * resolution`` are
    reported as a single point.
    """
    if s.arity != 1:
        raise ValueError("minimize_expected_score handles scalar forecasts; use minimize_joint_score")
    lo, hi = default_bracket(d) if bounds is None else map(float, bounds)
    xs = np.linspace(lo, hi, grid)
    vals = _expected_many(s, xs, d, method)
    f = lambda x: float(_expected_many(s, [x], d, method)[0])
    m = float(vals.min())
    tol = 64 * _EPS * (1.0 + abs(m) + max(abs(lo), abs(hi)))
    near = np.flatnonzero(vals <= m + tol)
    i0, i1 = int(near[0]), int(near[-1])
    if i0 == 0 or i1 == grid - 1:
        raise BracketError(f"bracket failure: optimum at grid boundary of [{lo}, {hi}]")
    a, b = xs[i0 - 1], xs[i1 + 1]
    res = optimize.minimize_scalar(f, bounds=(a, b), method="bounded",
                                   options={"xatol": resolution * 1e-3})
    xstar, fstar = float(res.x), float(res.fun)
    if vals[i0] < fstar:
        xstar, fstar = float(xs[i0]), float(vals[i0])
    ok = lambda x: f(x) <= fstar + tol

    def push(inside, outside):
        while abs(outside - inside) > resolution * 1e-2:
            mid = 0.5 * (inside + outside)
            if ok(mid):
                inside = mid
            else:
                outside = mid
        return inside

    left = push(xstar, a)
    right = push(xstar, b)
    # Around a strict minimum with curvature c, rounding noise alone makes
    # a flat-looking set of width about 2 sqrt(tol / c).
    j = int(np.argmin(vals))
    step = xs[1] - xs[0]
    second = vals[j - 1] - 2.0 * vals[j] + vals[j + 1] if 0 < j < grid - 1 else 0.0
    noise = 4.0 * step * math.sqrt(tol / second) if second > 1e3 * tol else 0.0
    if right - left <= max(2 * resolution, noise):
        left = right = xstar
    return ArgminResult(float(left), float(right), float(fstar))


def minimize_joint_score(s: JointVarEs, d: Distribution, bounds1=None, bounds2=None,
                         grid: int = 121, method: str = "auto") -> tuple[tuple[float, float], float]:
    """Minimise ``E S((x1, x2), Y)`` on a 2-D grid, then polish by Nelder-Mead."""
    if s.arity != 2:
        raise ValueError("minimize_joint_score needs a pair-valued score")
    b1 = default_bracket(d) if bounds1 is None else bounds1
    b2 = b1 if bounds2 is None else bounds2
    g1 = np.linspace(*b1, grid)
    g2 = np.linspace(*b2, grid)
    f = lambda p: expected_score(s, (p[0], p[1]), d, method)
    vals = np.array([[f((u, v)) for v in g2] for u in g1])
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    if i in (0, grid - 1) or j in (0, grid - 1):
        raise BracketError("bracket failure: joint optimum at grid boundary")
    res = optimize.minimize(f, x0=[g1[i], g2[j]], method="Nelder-Mead",
                            options={"xatol": 1e-9, "fatol": 1e-14, "maxiter": 4000})
    return (float(res.x[0]), float(res.x[1])), float(res.fun)


def empirical_avg_score(s: ScoringFunction, forecasts, realizations) -> float:
    """``(1/T) sum_t S(forecast_t, y_t)``."""
    f = np.asarray(forecasts, dtype=float)
    y = np.asarray(realizations, dtype=float).ravel()
    t = f.shape[0] if f.ndim else 0
    if t != y.size or t < 1:
        raise ValueError("forecasts and realizations must have equal length T >= 1")
    if f.shape != ((t,) if s.arity == 1 else (t, 2)):
        raise ValueError(f"forecasts for {s.name} must have shape (T,) or (T, 2)")
    return float(np.mean(s.score(f, y)))


# --------------------------------------------------------------------------
# Convex level sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelSetWitness:
    """Two laws with equal risk whose mixture has different risk."""

    f1: DiscreteDistribution
    f2: DiscreteDistribution
    lam: float
    rho1: float
    rho2: float
    rho_mix: float

    @property
    def gap(self) -> float:
        return abs(self.rho_mix - self.rho1)


DEFAULT_LAMBDAS = tuple(np.round(np.linspace(0.05, 0.95, 19), 10))


def convex_level_set_check(rho: RiskMeasureSpec, f1: DiscreteDistribution, f2: DiscreteDistribution,
                           lam_grid: Sequence[float] = DEFAULT_LAMBDAS, tol: float = 1e-8):
    """Return ``None`` if every mixture keeps the common risk level, else a witness."""
    r1, r2 = rho.evaluate(f1), rho.evaluate(f2)
    if not abs(r1 - r2) <= tol:
        raise ValueError(f"laws are not matched: rho(F1)={r1!r}, rho(F2)={r2!r}")
    for lam in lam_grid:
        if not 0.0 < lam < 1.0:
            raise ValueError("mixing weights must lie in (0, 1)")
        rm = rho.evaluate(mixture([f1, f2], [lam, 1.0 - lam]))
        if abs(rm - r1) > tol:
            return LevelSetWitness(f1, f2, float(lam), r1, r2, rm)
    return None


def _random_law(rng, k):
    if rng.random() < 0.5:
        atoms = np.sort(rng.choice(np.arange(-6, 7), size=k, replace=False)).astype(float)
    else:
        atoms = np.sort(rng.uniform(-6.0, 6.0, size=k))
    if rng.random() < 0.5:
        units = 1 + rng.multinomial(10 - k, np.full(k, 1.0 / k))
        probs = units / units.sum()
    else:
        probs = rng.dirichlet(np.ones(k))
        probs = np.maximum(probs, 1e-3)
        probs /= probs.sum()
    return DiscreteDistribution(atoms, probs)


def _match_last_atom(rho, f2, target, match_tol):
    """Move the largest atom of ``f2`` so that ``rho(f2) == target``."""
    x, p = f2.atoms, f2.probs
    floor = x[-2] + 1e-9 if x.size > 1 else -1e6

    def moved(t):
        return DiscreteDistribution(np.append(x[:-1], t), p)

    def gap(t):
        return rho.evaluate(moved(t)) - target

    lo, hi = floor, max(floor, target) + 1.0
    glo = gap(lo)
    if glo > 0:
        return None
    for _ in range(60):
        if gap(hi) >= 0:
            break
        hi = floor + 2.0 * (hi - floor)
    else:
        return None
    if glo == 0:
        return moved(lo)
    try:
        t = optimize.brentq(gap, lo, hi, xtol=1e-14, rtol=4 * _EPS, maxiter=500)
    except ValueError:
        return None
    cand = moved(t)
    return cand if abs(gap(t)) <= match_tol else None


def matched_pair(rho: RiskMeasureSpec, rng: np.random.Generator, support_size: int = 3,
                 match_tol: float = 1e-10):
    """Draw a random pair of discrete laws with equal risk under ``rho``.

    Matching first tries a root-find on the largest atom of the second law
    and falls back to translating the second law.
    """
    f1 = _random_law(rng, support_size)
    f2 = _random_law(rng, support_size)
    target = rho.evaluate(f1)
    cand = _match_last_atom(rho, f2, target, match_tol)
    if cand is None:
        shift = (target - rho.evaluate(f2)) / rho.scale
        cand = DiscreteDistribution(f2.atoms + shift, f2.probs)
        if not abs(rho.evaluate(cand) - target) <= match_tol:
            return None
    return f1, cand


def matched_pairs(rho: RiskMeasureSpec, count: int, support_size: int = 3, seed: int = 0,
                  match_tol: float = 1e-10) -> Iterator[tuple[DiscreteDistribution, DiscreteDistribution]]:
    rng = np.random.default_rng(seed)
    made = 0
    while made < count:
        pair = matched_pair(rho, rng, support_size, match_tol)
        if pair is not None:
            made += 1
            yield pair


def search_cls_violation(rho: RiskMeasureSpec, support_size: int = 3, trials: int = 10**4,
                         seed: int = 0, tol: float = 1e-8) -> LevelSetWitness | None:
    """Randomised search for a level-set convexity witness; deterministic under ``seed``."""
    if support_size < 2:
        raise ValueError("support_size must be >= 2")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        pair = matched_pair(rho, rng, support_size)
        if pair is None:
            continue
        w = convex_level_set_check(rho, *pair, tol=tol)
        if w is not None:
            return w
    return None


def count_cls_violations(rho: RiskMeasureSpec, pairs: int = 1000, support_size: int = 3,
                         seed: int = 0, tol: float = 1e-8) -> tuple[int, LevelSetWitness | None]:
    """Number of matched pairs failing the check, and the first witness."""
    bad, first = 0, None
    for f1, f2 in matched_pairs(rho, pairs, support_size, seed):
        w = convex_level_set_check(rho, f1, f2, tol=tol)
        if w is not None:
            bad += 1
            first = first or w
    return bad, first


# --------------------------------------------------------------------------
# Joint-score counterexample curves
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleTable:
    """Expected joint scores of an ES-understating bank versus a VaR-understating benchmark.

    The bank forecasts ``(VaR, x ES)``; the benchmark forecasts ``(x VaR, ES)``.
    """

    x: np.ndarray
    bank: np.ndarray
    benchmark: np.ndarray
    var: float
    es: float
    k: float
    preset: str

    def spread(self, which: str = "bank") -> float:
        v = self.bank if which == "bank" else self.benchmark
        return float(v.max() - v.min())

    def rows(self):
        return list(zip(self.x.tolist(), self.bank.tolist(), self.benchmark.tolist()))

    def to_csv(self, path_or_file):
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh)
            w.writerow(["x", "bank_score", "benchmark_score"])
            for r in self.rows():
                w.writerow([f"{v:.12g}" for v in r])
        finally:
            if own:
                fh.close()


def score_grid(points: int = 46, lo: float = 0.55, hi: float = 1.0) -> np.ndarray:
    """``points`` equally spaced values strictly inside ``(lo, hi)``."""
    return np.linspace(lo, hi, points + 2)[1:-1]


def counterexample_curves(mu: float = -1.5, sigma: float = 1.0, alpha: float = 0.975, k: float = 1.0,
                          x_grid=None, preset: str = "logistic", method: str = "closed") -> CounterexampleTable:
    """Bank and benchmark expected scores for ``L ~ Normal(k mu, (k sigma)^2)``."""
    if not sigma > 0 or not 0 < alpha < 1 or not k > 0:
        raise ValueError("need sigma > 0, alpha in (0, 1) and k > 0")
    xs = score_grid() if x_grid is None else np.asarray(x_grid, dtype=float)
    if np.any((xs <= 0) | (xs >= 1)):
        raise ValueError("x_grid must lie in (0, 1)")
    law = Normal(k * mu, k * sigma)
    v, e = _var(law, alpha), _es(law, alpha)
    s = JointVarEs(alpha, preset)
    bank = np.array([expected_score(s, (v, x * e), law, method) for x in xs])
    bench = np.array([expected_score(s, (x * v, e), law, method) for x in xs])
    return CounterexampleTable(xs, bank, bench, v, e, float(k), preset)


def counterexample_monte_carlo(table: CounterexampleTable, mu: float = -1.5, sigma: float = 1.0,
                               alpha: float = 0.975, n: int = 10**6, seed: int = 0):
    """Monte-Carlo bank and benchmark scores with batch-means standard errors.

    Returns arrays ``(bank_mean, bank_se, bench_mean, bench_se)``; one
    sample is shared by every grid point.
    """
    law = Normal(table.k * mu, table.k * sigma)
    y = law.sample(n, seed)
    s = JointVarEs(alpha, table.preset)
    out = np.empty((4, table.x.size))
    for i, x in enumerate(table.x):
        out[0, i], out[1, i] = monte_carlo_score(s, (table.var, x * table.es), law, sample=y)
        out[2, i], out[3, i] = monte_carlo_score(s, (x * table.var, table.es), law, sample=y)
    return out[0], out[1], out[2], out[3]


def crossover_point(mu: float = -1.5, sigma: float = 1.0, alpha: float = 0.975, k: float = 1.0,
                    preset: str = "logistic", bracket=(1e-3, 0.999)) -> float | None:
    """Largest ``x`` below which the bank no longer scores better, or ``None``.

    Scans the bracket for sign changes of ``bank - benchmark`` and refines
    the last one with Brent's method.
    """
    law = Normal(k * mu, k * sigma)
    v, e = _var(law, alpha), _es(law, alpha)
    s = JointVarEs(alpha, preset)

    def diff(x):
        return (expected_score(s, (v, x * e), law, "closed")
                - expected_score(s, (x * v, e), law, "closed"))

    xs = np.linspace(*bracket, 999)
    ds = np.array([diff(x) for x in xs])
    flips = np.flatnonzero(np.sign(ds[:-1]) != np.sign(ds[1:]))
    if flips.size == 0:
        return None
    i = int(flips[-1])
    return float(optimize.brentq(diff, xs[i], xs[i + 1], xtol=1e-12))
