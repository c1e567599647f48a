"""Loss distributions, one-sided quantiles and tail conditioning.

Losses are positive-bad throughout. Every distribution exposes a
right-continuous CDF together with the left quantile ``inf{x | F(x) >= a}``
and the right quantile ``inf{x | F(x) > a}``; the two differ only where the
CDF is flat at level ``a``.
"""
from __future__ import annotations

import csv
import datetime as _dt
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, special, stats

from .errors import ConfigError, InfiniteQuantileError, NonIntegrableError

# Cumulative probabilities closer than this are treated as equal when
# locating quantiles of laws with atoms.
PROB_TOL = 1e-12
# Absolute x-tolerance for bisection quantiles.
X_TOL = 1e-12


def _check_level(alpha, *, upper_closed=True):
    a = np.asarray(alpha, dtype=float)
    hi_ok = a <= 1.0 if upper_closed else a < 1.0
    if np.any(~np.isfinite(a)) or np.any(a < 0.0) or np.any(~hi_ok):
        rng = "[0, 1]" if upper_closed else "[0, 1)"
        raise ValueError(f"probability level must lie in {rng}, got {alpha!r}")
    return a


def _scalar_or_array(out, like):
    if np.ndim(like) == 0:
        return float(np.asarray(out).reshape(()))
    return out


class Distribution(ABC):
    """Univariate loss law.

    Subclasses provide ``cdf``, interior quantiles via ``_qleft``/``_qright``
    and the support endpoints ``lower``/``upper`` (possibly infinite).
    """

    lower: float
    upper: float

    @abstractmethod
    def cdf(self, x):
        """Right-continuous distribution function."""

    def sf(self, x):
        """Survival function ``P(X > x)``."""
        return 1.0 - self.cdf(x)

    @abstractmethod
    def _qleft(self, a: np.ndarray) -> np.ndarray:
        """Left quantile for levels strictly inside (0, 1)."""

    def _qright(self, a: np.ndarray) -> np.ndarray:
        return self._qleft(a)

    def breakpoints(self) -> np.ndarray:
        """Locations of atoms (points where the CDF jumps)."""
        return np.empty(0)

    @property
    def is_discrete(self) -> bool:
        return False

    def quantile_left(self, alpha):
        """``inf{x | F(x) >= alpha}``; at ``alpha=0`` the essential infimum."""
        a = _check_level(alpha)
        flat = np.atleast_1d(a).astype(float)
        out = np.empty_like(flat)
        lo = flat == 0.0
        hi = flat == 1.0
        mid = ~(lo | hi)
        if np.any(hi) and not np.isfinite(self.upper):
            raise InfiniteQuantileError("infinite quantile: level 1 on unbounded support")
        if np.any(lo) and not np.isfinite(self.lower):
            raise InfiniteQuantileError("infinite quantile: level 0 on unbounded support")
        out[lo] = self.lower
        out[hi] = self.upper
        if np.any(mid):
            out[mid] = self._qleft(flat[mid])
        return _scalar_or_array(out.reshape(np.shape(a)), alpha)

    def quantile_right(self, alpha):
        """``inf{x | F(x) > alpha}`` for ``alpha`` in [0, 1)."""
        a = _check_level(alpha, upper_closed=False)
        flat = np.atleast_1d(a).astype(float)
        out = np.empty_like(flat)
        lo = flat == 0.0
        if np.any(lo) and not np.isfinite(self.lower):
            raise InfiniteQuantileError("infinite quantile: level 0 on unbounded support")
        out[lo] = self.lower
        if np.any(~lo):
            out[~lo] = self._qright(flat[~lo])
        return _scalar_or_array(out.reshape(np.shape(a)), alpha)

    def mean(self) -> float:
        """``int_0^inf S(x) dx - int_-inf^0 F(x) dx`` by quadrature."""
        pts = self.breakpoints()
        pos = _integrate_pieces(self.sf, max(0.0, self.lower), self.upper, pts) if self.upper > 0 else 0.0
        neg = _integrate_pieces(self.cdf, self.lower, min(0.0, self.upper), pts) if self.lower < 0 else 0.0
        return max(0.0, self.lower) + min(0.0, self.upper) + pos - neg

    def stop_loss(self, t: float) -> float:
        """``E[(X - t)^+]`` by quadrature of the survival function."""
        t = float(t)
        if t >= self.upper:
            return 0.0
        start = max(t, self.lower)
        base = start - t  # survival is 1 on [t, lower)
        return base + _integrate_pieces(self.sf, start, self.upper, self.breakpoints())

    def tail_mean(self, alpha: float) -> float:
        """Mean of the alpha-tail law: ``VaR + E[(X - VaR)^+] / (1 - alpha)``."""
        _check_level(alpha, upper_closed=False)
        if alpha == 0.0:
            return self.mean()
        v = self.quantile_left(alpha)
        return v + self.stop_loss(v) / (1.0 - alpha)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """Inverse-transform sampling; deterministic given ``seed``."""
        rng = np.random.default_rng(seed)
        u = rng.random(n)
        return np.asarray(self.quantile_left(np.clip(u, 1e-300, None)), dtype=float)

    def variance(self) -> float:
        m = self.mean()
        second = _integrate_pieces(
            lambda x: 2.0 * x * self.sf(x), max(0.0, self.lower), self.upper, self.breakpoints()
        )
        if self.lower < 0:
            second += _integrate_pieces(
                lambda x: -2.0 * x * self.cdf(x), self.lower, min(0.0, self.upper), self.breakpoints()
            )
        return second - m * m


def _integrate_pieces(fn, a: float, b: float, points=()) -> float:
    """Integrate ``fn`` over [a, b] splitting at ``points``; raises on divergence."""
    if not a < b:
        return 0.0
    pts = sorted(p for p in np.asarray(points, dtype=float) if a < p < b and np.isfinite(p))
    edges = [a, *pts, b]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += _quad(fn, lo, hi)
    return total


def _quad(fn, lo, hi) -> float:
    with np.errstate(all="ignore"):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _ = integrate.quad(
                    lambda x: float(fn(x)), lo, hi, epsabs=1e-13, epsrel=1e-10, limit=500
                )
            except integrate.IntegrationWarning as exc:
                raise NonIntegrableError(f"non-integrable on [{lo}, {hi}]: {exc}") from None
    if not np.isfinite(val):
        raise NonIntegrableError(f"non-integrable on [{lo}, {hi}]")
    return val


# --------------------------------------------------------------------------
# Discrete laws
# --------------------------------------------------------------------------


class DiscreteDistribution(Distribution):
    """Finite law ``sum_i p_i delta_{x_i}`` with strictly increasing atoms."""

    def __init__(self, atoms: Sequence[float], probs: Sequence[float]):
        x = np.array(atoms, dtype=float).ravel()
        p = np.array(probs, dtype=float).ravel()
        if x.size == 0 or x.size != p.size:
            raise ValueError("atoms and probs must be nonempty and of equal length")
        if not np.all(np.isfinite(x)):
            raise ValueError("atoms must be finite")
        if np.any(np.diff(x) <= 0):
            raise ValueError("atoms must be strictly increasing")
        if np.any(~(p > 0)):
            raise ValueError("probs must be positive")
        total = p.sum()
        if abs(total - 1.0) > PROB_TOL * max(1, x.size):
            raise ValueError(f"probs must sum to 1, got {total!r}")
        p = p / total
        cum = np.cumsum(p)
        cum[-1] = 1.0
        for arr in (x, p, cum):
            arr.flags.writeable = False
        self._x, self._p, self._cum = x, p, cum
        self.lower = float(x[0])
        self.upper = float(x[-1])

    @classmethod
    def from_pairs(cls, pairs) -> "DiscreteDistribution":
        """Build from ``(atom, prob)`` pairs in any order; duplicates are merged."""
        xs, ps = zip(*pairs)
        return _merge_atoms(np.asarray(xs, float), np.asarray(ps, float))

    @property
    def atoms(self) -> np.ndarray:
        return self._x

    @property
    def probs(self) -> np.ndarray:
        return self._p

    @property
    def cumprobs(self) -> np.ndarray:
        return self._cum

    @property
    def is_discrete(self) -> bool:
        return True

    def __len__(self):
        return self._x.size

    def __repr__(self):
        body = ", ".join(f"({x:g}, {p:g})" for x, p in zip(self._x, self._p))
        return f"{type(self).__name__}{{{body}}}"

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return np.array_equal(self._x, other._x) and np.allclose(self._p, other._p, rtol=0, atol=1e-15)

    __hash__ = None

    def cdf(self, x):
        k = np.searchsorted(self._x, x, side="right")
        cum0 = np.concatenate(([0.0], self._cum))
        return _scalar_or_array(cum0[k], x)

    def sf(self, x):
        k = np.searchsorted(self._x, x, side="right")
        tail = np.concatenate((np.cumsum(self._p[::-1])[::-1], [0.0]))
        return _scalar_or_array(tail[k], x)

    def _qleft(self, a):
        k = np.searchsorted(self._cum, a - PROB_TOL, side="left")
        return self._x[np.minimum(k, self._x.size - 1)]

    def _qright(self, a):
        k = np.searchsorted(self._cum, a + PROB_TOL, side="right")
        return self._x[np.minimum(k, self._x.size - 1)]

    def breakpoints(self):
        return self._x

    def mean(self):
        return float(np.dot(self._p, self._x))

    def variance(self):
        m = self.mean()
        return float(np.dot(self._p, (self._x - m) ** 2))

    def stop_loss(self, t):
        return float(np.dot(self._p, np.maximum(self._x - float(t), 0.0)))

    def expect(self, fn) -> float:
        """Exact ``E[fn(X)]`` as a finite sum."""
        return float(np.dot(self._p, fn(self._x)))

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        return rng.choice(self._x, size=n, p=self._p)


def _merge_atoms(x: np.ndarray, p: np.ndarray) -> DiscreteDistribution:
    order = np.argsort(x, kind="stable")
    x, p = x[order], p[order]
    uniq, inverse = np.unique(x, return_inverse=True)
    merged = np.zeros(uniq.size)
    np.add.at(merged, inverse, p)
    keep = merged > 0
    return DiscreteDistribution(uniq[keep], merged[keep])


class EmpiricalDistribution(DiscreteDistribution):
    """Discrete law of a sample; equal values are merged into one atom."""

    def __init__(self, samples: Sequence[float], weights: Sequence[float] | None = None):
        s = np.array(samples, dtype=float).ravel()
        if s.size == 0:
            raise ValueError("empirical distribution needs at least one sample")
        if weights is None:
            w = np.full(s.size, 1.0 / s.size)
        else:
            w = np.array(weights, dtype=float).ravel()
            if w.size != s.size:
                raise ValueError("weights and samples differ in length")
            if np.any(~(w > 0)):
                raise ValueError("weights must be positive")
            if abs(w.sum() - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")
        merged = _merge_atoms(s, w)
        super().__init__(merged.atoms, merged.probs)
        self.samples = np.sort(s)
        self.samples.flags.writeable = False


def point_mass(x: float) -> DiscreteDistribution:
    return DiscreteDistribution([x], [1.0])


# --------------------------------------------------------------------------
# Parametric laws
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Normal(Distribution):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("Normal requires sigma > 0")

    lower = -math.inf
    upper = math.inf

    def cdf(self, x):
        return _scalar_or_array(stats.norm.cdf(x, self.mu, self.sigma), x)

    def sf(self, x):
        return _scalar_or_array(stats.norm.sf(x, self.mu, self.sigma), x)

    def pdf(self, x):
        return stats.norm.pdf(x, self.mu, self.sigma)

    def _qleft(self, a):
        return self.mu + self.sigma * special.ndtri(a)

    def mean(self):
        return float(self.mu)

    def variance(self):
        return float(self.sigma**2)

    def stop_loss(self, t):
        z = (float(t) - self.mu) / self.sigma
        return self.sigma * (stats.norm.pdf(z) - z * stats.norm.sf(z))

    def tail_mean(self, alpha):
        _check_level(alpha, upper_closed=False)
        if alpha == 0.0:
            return float(self.mu)
        z = special.ndtri(alpha)
        return self.mu + self.sigma * stats.norm.pdf(z) / (1.0 - alpha)

    def sample(self, n, seed):
        return np.random.default_rng(seed).normal(self.mu, self.sigma, size=n)


@dataclass(frozen=True)
class StudentT(Distribution):
    """Location-scale Student t. ``nu <= 1`` has no mean; quantiles still work."""

    nu: float
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.nu > 0 or not self.scale > 0:
            raise ValueError("StudentT requires nu > 0 and scale > 0")

    lower = -math.inf
    upper = math.inf

    def cdf(self, x):
        return _scalar_or_array(stats.t.cdf(x, self.nu, self.loc, self.scale), x)

    def sf(self, x):
        return _scalar_or_array(stats.t.sf(x, self.nu, self.loc, self.scale), x)

    def pdf(self, x):
        return stats.t.pdf(x, self.nu, self.loc, self.scale)

    def _qleft(self, a):
        return self.loc + self.scale * stats.t.ppf(a, self.nu)

    def _need_mean(self):
        if self.nu <= 1:
            raise NonIntegrableError(f"StudentT(nu={self.nu}) has no finite mean")

    def mean(self):
        self._need_mean()
        return float(self.loc)

    def variance(self):
        if self.nu <= 2:
            raise NonIntegrableError(f"StudentT(nu={self.nu}) has infinite variance")
        return float(self.scale**2 * self.nu / (self.nu - 2))

    def stop_loss(self, t):
        self._need_mean()
        k = (float(t) - self.loc) / self.scale
        nu = self.nu
        upper_part = (nu + k * k) / (nu - 1) * stats.t.pdf(k, nu)
        return self.scale * (upper_part - k * stats.t.sf(k, nu))

    def tail_mean(self, alpha):
        _check_level(alpha, upper_closed=False)
        self._need_mean()
        if alpha == 0.0:
            return float(self.loc)
        k = stats.t.ppf(alpha, self.nu)
        nu = self.nu
        return self.loc + self.scale * stats.t.pdf(k, nu) / (1 - alpha) * (nu + k * k) / (nu - 1)

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        return self.loc + self.scale * rng.standard_t(self.nu, size=n)


@dataclass(frozen=True)
class Weibull(Distribution):
    shape: float
    scale: float = 1.0

    def __post_init__(self):
        if not self.shape > 0 or not self.scale > 0:
            raise ValueError("Weibull requires shape > 0 and scale > 0")

    lower = 0.0
    upper = math.inf

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        z = np.maximum(x, 0.0) / self.scale
        return _scalar_or_array(np.where(x < 0, 0.0, -np.expm1(-(z**self.shape))), x)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        z = np.maximum(x, 0.0) / self.scale
        return _scalar_or_array(np.where(x < 0, 1.0, np.exp(-(z**self.shape))), x)

    def pdf(self, x):
        return stats.weibull_min.pdf(x, self.shape, scale=self.scale)

    def _qleft(self, a):
        return self.scale * (-np.log1p(-a)) ** (1.0 / self.shape)

    def mean(self):
        return float(self.scale * special.gamma(1 + 1 / self.shape))

    def variance(self):
        k = self.shape
        return float(self.scale**2 * (special.gamma(1 + 2 / k) - special.gamma(1 + 1 / k) ** 2))

    def _upper_first_moment(self, v):
        # E[X 1{X > v}] via the upper incomplete gamma function
        a = 1 + 1 / self.shape
        return self.scale * special.gammaincc(a, (max(v, 0.0) / self.scale) ** self.shape) * special.gamma(a)

    def stop_loss(self, t):
        t = float(t)
        if t <= 0:
            return self.mean() - t
        return self._upper_first_moment(t) - t * float(self.sf(t))

    def sample(self, n, seed):
        return self.scale * np.random.default_rng(seed).weibull(self.shape, size=n)


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float = 1.0
    loc: float = 0.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("Exponential requires rate > 0")

    upper = math.inf

    @property
    def lower(self):
        return float(self.loc)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        z = np.maximum(x - self.loc, 0.0)
        return _scalar_or_array(-np.expm1(-self.rate * z), x)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return _scalar_or_array(np.exp(-self.rate * np.maximum(x - self.loc, 0.0)), x)

    def pdf(self, x):
        return stats.expon.pdf(x, loc=self.loc, scale=1 / self.rate)

    def _qleft(self, a):
        return self.loc - np.log1p(-a) / self.rate

    def mean(self):
        return float(self.loc + 1 / self.rate)

    def variance(self):
        return float(1 / self.rate**2)

    def stop_loss(self, t):
        t = float(t)
        if t <= self.loc:
            return self.loc - t + 1 / self.rate
        return math.exp(-self.rate * (t - self.loc)) / self.rate

    def sample(self, n, seed):
        return self.loc + np.random.default_rng(seed).exponential(1 / self.rate, size=n)


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("Uniform requires b > a")

    @property
    def lower(self):
        return float(self.a)

    @property
    def upper(self):
        return float(self.b)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _scalar_or_array(np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0), x)

    def pdf(self, x):
        return stats.uniform.pdf(x, self.a, self.b - self.a)

    def _qleft(self, a):
        return self.a + a * (self.b - self.a)

    def mean(self):
        return 0.5 * (self.a + self.b)

    def variance(self):
        return (self.b - self.a) ** 2 / 12.0

    def stop_loss(self, t):
        t = float(t)
        if t <= self.a:
            return self.mean() - t
        if t >= self.b:
            return 0.0
        return (self.b - t) ** 2 / (2 * (self.b - self.a))


@dataclass(frozen=True)
class TranslatedExpMixture(Distribution):
    """``c + Exp(lam)`` with probability ``1 - beta`` and an atom at ``n``.

    The atom weight ``beta = mu_m / (n - c - 1/lam)`` keeps the mean at
    ``c + mu_m + 1/lam`` whatever the position of the atom.
    """

    c: float
    lam: float
    mu_m: float
    n: float

    def __post_init__(self):
        if not self.lam > 0 or not self.mu_m > 0:
            raise ValueError("TranslatedExpMixture requires lam > 0 and mu_m > 0")
        denom = self.n - self.c - 1.0 / self.lam
        if not denom > 0 or not 0 < self.mu_m / denom < 1:
            raise ValueError("atom weight beta(n) must lie in (0, 1); need n > c + mu_m + 1/lam")

    @property
    def beta(self) -> float:
        return self.mu_m / (self.n - self.c - 1.0 / self.lam)

    @property
    def lower(self):
        return float(self.c)

    upper = math.inf

    def components(self):
        return [Exponential(self.lam, self.c), point_mass(self.n)], [1 - self.beta, self.beta]

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        b = self.beta
        cont = (1 - b) * -np.expm1(-self.lam * np.maximum(x - self.c, 0.0))
        return _scalar_or_array(cont + b * (x >= self.n), x)

    def _exp_q(self, p):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.c - np.log1p(-p) / self.lam

    def _split(self, a):
        b = self.beta
        below = (1 - b) * -math.expm1(-self.lam * (self.n - self.c))
        return b, below

    def _qleft(self, a):
        b, below = self._split(a)
        above = np.clip((a - b) / (1 - b), 0.0, None)
        return np.where(
            a <= below + PROB_TOL,
            self._exp_q(np.minimum(a / (1 - b), 1 - 1e-300)),
            np.where(a <= below + b + PROB_TOL, self.n, self._exp_q(above)),
        )

    def _qright(self, a):
        b, below = self._split(a)
        above = np.clip((a - b) / (1 - b), 0.0, None)
        return np.where(
            a < below - PROB_TOL,
            self._exp_q(a / (1 - b)),
            np.where(a < below + b - PROB_TOL, self.n, self._exp_q(above)),
        )

    def breakpoints(self):
        return np.array([self.n], dtype=float)

    def mean(self):
        b = self.beta
        return (1 - b) * (self.c + 1 / self.lam) + b * self.n

    def stop_loss(self, t):
        b = self.beta
        t = float(t)
        return (1 - b) * Exponential(self.lam, self.c).stop_loss(t) + b * max(self.n - t, 0.0)

    def sample(self, n, seed):
        comps, w = self.components()
        return Mixture(comps, w).sample(n, seed)


# --------------------------------------------------------------------------
# Mixtures and tails
# --------------------------------------------------------------------------


class Mixture(Distribution):
    """Finite mixture ``sum_i w_i F_i``; quantiles by bracketed bisection."""

    def __init__(self, components: Sequence[Distribution], weights: Sequence[float]):
        w = np.array(weights, dtype=float).ravel()
        if len(components) != w.size or w.size == 0:
            raise ValueError("components and weights must have equal, nonzero length")
        if np.any(~(w > 0)) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("mixture weights must be positive and sum to 1")
        self.components = tuple(components)
        self.weights = w / w.sum()
        self.weights.flags.writeable = False
        self.lower = float(min(c.lower for c in components))
        self.upper = float(max(c.upper for c in components))

    def __repr__(self):
        return f"Mixture({list(self.components)!r}, {self.weights.tolist()!r})"

    def cdf(self, x):
        out = sum(w * np.asarray(c.cdf(x), dtype=float) for c, w in zip(self.components, self.weights))
        return _scalar_or_array(np.minimum(out, 1.0), x)

    def sf(self, x):
        out = sum(w * np.asarray(c.sf(x), dtype=float) for c, w in zip(self.components, self.weights))
        return _scalar_or_array(np.clip(out, 0.0, 1.0), x)

    def breakpoints(self):
        pts = [c.breakpoints() for c in self.components]
        return np.unique(np.concatenate(pts)) if pts else np.empty(0)

    def _bisect(self, a, left: bool):
        qs = np.array([c.quantile_left(a) if left else c.quantile_right(a) for c in self.components])
        lo = qs.min(axis=0)
        hi = qs.max(axis=0)

        def hit(x):
            f = np.asarray(self.cdf(x), dtype=float)
            return f >= a - PROB_TOL if left else f > a + PROB_TOL

        # invariant: hit(hi) true; lo is either the answer or has hit false
        done = hit(lo)
        hi = np.where(done, lo, hi)
        for _ in range(200):
            width = hi - lo
            active = (width > X_TOL) & ~done
            if not np.any(active):
                break
            mid = lo + 0.5 * width
            stalled = (mid <= lo) | (mid >= hi)
            active &= ~stalled
            h = hit(mid)
            hi = np.where(active & h, mid, hi)
            lo = np.where(active & ~h, mid, lo)
            done |= stalled
        atoms = self.breakpoints()
        if atoms.size:
            k = np.searchsorted(atoms, lo, side="left")
            k = np.minimum(k, atoms.size - 1)
            cand = atoms[k]
            snap = (cand >= lo) & (cand <= hi)
            hi = np.where(snap, cand, hi)
        return hi

    def _qleft(self, a):
        return self._bisect(a, left=True)

    def _qright(self, a):
        return self._bisect(a, left=False)

    def mean(self):
        return float(sum(w * c.mean() for c, w in zip(self.components, self.weights)))

    def stop_loss(self, t):
        return float(sum(w * c.stop_loss(t) for c, w in zip(self.components, self.weights)))

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        which = rng.choice(len(self.components), size=n, p=self.weights)
        out = np.empty(n)
        for j, comp in enumerate(self.components):
            idx = np.flatnonzero(which == j)
            if idx.size:
                out[idx] = comp.sample(idx.size, int(rng.integers(2**62)))
        return out


def mixture(ds: Sequence[Distribution], ws: Sequence[float]) -> Distribution:
    """Weight-average of laws. All-discrete inputs give a :class:`DiscreteDistribution`."""
    w = np.asarray(ws, dtype=float).ravel()
    if len(ds) != w.size:
        raise ValueError("mixture: number of laws and weights differ")
    if np.any(~(w > 0)) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("mixture weights must be positive and sum to 1")
    views = [as_discrete(d) for d in ds]
    if all(v is not None for v in views):
        xs = np.concatenate([v.atoms for v in views])
        ps = np.concatenate([wi * v.probs for v, wi in zip(views, w)])
        return _merge_atoms(xs, ps)
    return Mixture(list(ds), w)


class TailDistribution(Distribution):
    """The alpha-tail law: 0 below ``VaR_alpha``, ``(F - alpha)/(1 - alpha)`` above."""

    def __init__(self, base: Distribution, level: float):
        _check_level(level, upper_closed=False)
        self.base = base
        self.level = float(level)
        if level > 0:
            self.var = float(base.quantile_left(level))
            self.lower = float(base.quantile_right(level))
        else:
            self.var = self.lower = float(base.lower)
        self.upper = float(base.upper)

    def __repr__(self):
        return f"TailDistribution({self.base!r}, level={self.level})"

    def _to_base(self, u):
        return self.level + u * (1.0 - self.level)

    def cdf(self, x):
        if self.level == 0.0:
            return self.base.cdf(x)
        x = np.asarray(x, dtype=float)
        f = (np.asarray(self.base.cdf(x), dtype=float) - self.level) / (1.0 - self.level)
        return _scalar_or_array(np.where(x < self.var, 0.0, np.clip(f, 0.0, 1.0)), x)

    def _qleft(self, a):
        return np.asarray(self.base.quantile_left(self._to_base(a)), dtype=float)

    def _qright(self, a):
        return np.asarray(self.base.quantile_right(self._to_base(a)), dtype=float)

    def breakpoints(self):
        b = self.base.breakpoints()
        return b[b >= self.var]

    @property
    def is_discrete(self):
        return self.base.is_discrete

    def mean(self):
        return self.base.tail_mean(self.level)

    def stop_loss(self, t):
        t = float(t)
        if t <= self.var:
            return self.mean() - t
        return self.base.stop_loss(t) / (1.0 - self.level)

    def as_discrete(self) -> DiscreteDistribution | None:
        d = as_discrete(self.base)
        if d is None:
            return None
        keep = d.atoms >= self.var
        x = d.atoms[keep]
        f = d.cumprobs[keep]
        p = np.diff(np.concatenate(([self.level], f))) / (1.0 - self.level)
        p[0] = (f[0] - self.level) / (1.0 - self.level)
        ok = p > PROB_TOL
        return DiscreteDistribution(x[ok], p[ok] / p[ok].sum())

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        u = rng.random(n)
        return np.asarray(self.base.quantile_left(self._to_base(u)), dtype=float)


def as_discrete(d: Distribution) -> DiscreteDistribution | None:
    """Finite-support view of ``d`` when one exists, else ``None``."""
    if isinstance(d, DiscreteDistribution):
        return d
    if isinstance(d, TailDistribution):
        return d.as_discrete()
    if isinstance(d, Mixture):
        views = [as_discrete(c) for c in d.components]
        if all(v is not None for v in views):
            return mixture(views, d.weights)
    return None


# --------------------------------------------------------------------------
# Functional entry points
# --------------------------------------------------------------------------


def cdf(d: Distribution, x):
    return d.cdf(x)


def quantile_left(d: Distribution, alpha):
    return d.quantile_left(alpha)


def quantile_right(d: Distribution, alpha):
    return d.quantile_right(alpha)


def tail_distribution(d: Distribution, alpha: float) -> TailDistribution:
    return TailDistribution(d, alpha)


def sample(d: Distribution, n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise ValueError("sample size must be >= 1")
    return np.asarray(d.sample(int(n), int(seed)), dtype=float)


# --------------------------------------------------------------------------
# Text forms and CSV ingestion
# --------------------------------------------------------------------------

_PARAMETRIC = {
    "normal": (Normal, {"mu": "mu", "sigma": "sigma"}),
    "t": (StudentT, {"nu": "nu", "loc": "loc", "scale": "scale"}),
    "student_t": (StudentT, {"nu": "nu", "loc": "loc", "scale": "scale"}),
    "weibull": (Weibull, {"shape": "shape", "k": "shape", "scale": "scale"}),
    "exp": (Exponential, {"rate": "rate", "lam": "rate", "loc": "loc"}),
    "uniform": (Uniform, {"a": "a", "b": "b"}),
    "tem": (TranslatedExpMixture, {"c": "c", "lam": "lam", "mu": "mu_m", "mu_m": "mu_m", "n": "n"}),
}


def parse_distribution(text: str) -> Distribution:
    """Parse ``name:key=value,...``.

    Examples: ``normal:mu=-1.5,sigma=1``, ``t:nu=5,scale=2``,
    ``tem:c=0,lam=1,mu=1,n=100``, ``discrete:1=0.5,3=0.5``, ``point:7``.
    """
    name, _, rest = text.strip().partition(":")
    name = name.strip().lower()
    if name == "point":
        try:
            return point_mass(float(rest))
        except ValueError:
            raise ConfigError(f"bad point mass {text!r}") from None
    pairs = []
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"expected key=value in {text!r}, got {item!r}")
        pairs.append((key.strip(), val.strip()))
    try:
        if name == "discrete":
            return DiscreteDistribution.from_pairs([(float(k), float(v)) for k, v in pairs])
        if name not in _PARAMETRIC:
            raise ConfigError(f"unknown distribution {name!r}")
        cls, keys = _PARAMETRIC[name]
        kwargs = {}
        for key, val in pairs:
            if key not in keys:
                raise ConfigError(f"{name}: unknown parameter {key!r}")
            kwargs[keys[key]] = float(val)
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot build {text!r}: {exc}") from None


def read_series(path, column: str | None = None) -> tuple[list[_dt.date], np.ndarray]:
    """Read a ``date,<value>`` CSV with ISO-8601 dates.

    ``column`` selects the value column by header name; by default the
    second column is used.
    """
    dates, values = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(row for row in fh if row.strip() and not row.startswith("#"))
        header = [h.strip().lower() for h in next(reader)]
        if not header or header[0] != "date" or len(header) < 2:
            raise ConfigError(f"{path}: header must start with 'date,'")
        idx = 1 if column is None else _column_index(header, column, path)
        for lineno, row in enumerate(reader, start=2):
            try:
                dates.append(_dt.date.fromisoformat(row[0].strip()))
                values.append(float(row[idx]))
            except (ValueError, IndexError):
                raise ConfigError(f"{path}:{lineno}: malformed row {row!r}") from None
    return dates, np.asarray(values)


def _column_index(header, column, path):
    try:
        return header.index(column.lower())
    except ValueError:
        raise ConfigError(f"{path}: no column {column!r} in header {header}") from None
