"""Acceptance criteria 1-10.

Each test prints one ``criterion N: PASS|FAIL`` line with its measurements
and wall time; the lines are repeated in the pytest terminal summary.
Run as a script (``python3 tests/test_acceptance.py``) for the lines alone.
"""
import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from tailrisk import backtest as bt
from tailrisk import elicit as E
from tailrisk import forecast as F
from tailrisk import measures as M
from tailrisk import scenario as S
from tailrisk.dist import DiscreteDistribution, Normal, TranslatedExpMixture, read_series
from tailrisk.measures import RiskMeasureSpec

RESULTS = {}


def report(n, ok, detail, t0, budget):
    elapsed = time.perf_counter() - t0
    ok = bool(ok) and elapsed < budget
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  [{elapsed:6.2f}s < {budget:g}s]  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


# --------------------------------------------------------------------------
# 1. Normal oracle values
# --------------------------------------------------------------------------


def test_c01_normal_values():
    t0 = time.perf_counter()
    d = Normal(-1.5, 1.0)
    v, e = M.var(d, 0.975), M.es(d, 0.975)
    z = stats.norm.ppf(0.975)
    v_oracle, e_oracle = -1.5 + z, -1.5 + stats.norm.pdf(z) / 0.025
    ok = (abs(v - 0.460) <= 1e-3 and abs(e - 0.838) <= 1e-3
          and abs(v - v_oracle) <= 1e-12 and abs(e - e_oracle) <= 1e-10)
    assert report(1, ok, f"VaR={v:.6f} ES={e:.6f} (reference 0.460, 0.838)", t0, 1.0)


# --------------------------------------------------------------------------
# 2. ES-blindness of the translated-exponential family
# --------------------------------------------------------------------------


def test_c02_es_blindness():
    t0 = time.perf_counter()
    ns = [10.0, 1e2, 1e3, 1e4]
    laws = [TranslatedExpMixture(0.0, 1.0, 1.0, n) for n in ns]
    es_vals = [M.es(d, 0.0) for d in laws]
    es_quad = [M.choquet(d, M.identity(), method="quad") for d in laws]
    ms_vals = [M.ms(d, 0.0) for d in laws]
    # the median of c + Exp(lam) once the atom holds beta of the mass
    ms_oracle = [-math.log(1 - 1 / (2 * (1 - d.beta))) for d in laws]
    es_ok = all(abs(v - 2.0) <= 1e-6 for v in es_vals + es_quad)
    oracle_ok = all(abs(a - b) <= 1e-12 for a, b in zip(ms_vals, ms_oracle))
    spread = max(ms_vals) - min(ms_vals)
    # literal reading: MS constant in n as well
    ms_const = spread <= 1e-6
    detail = (f"ES={[round(v, 9) for v in es_vals]} MS={[round(v, 4) for v in ms_vals]} "
              f"MS spread={spread:.4f} (needs <= 1e-6; MS oracle ok={oracle_ok})")
    assert report(2, es_ok and oracle_ok and ms_const, detail, t0, 1.0)


# --------------------------------------------------------------------------
# 3. Elicitability recovery
# --------------------------------------------------------------------------


def _exact_law(rng):
    k = int(rng.integers(1, 7))
    if rng.random() < 0.5:
        atoms = np.sort(rng.choice(np.arange(-10, 11), size=k, replace=False)).astype(float)
    else:
        atoms = np.sort(rng.uniform(-10.0, 10.0, size=k))
    units = rng.integers(1, 11, size=k)
    total = int(units.sum())
    return atoms, [Fraction(int(u), total) for u in units], units / total


def _quantile_oracle(atoms, fracs, alpha):
    """``[q-, q+]`` from exact rational cumulative probabilities."""
    a = Fraction(alpha).limit_denominator(1000)
    cum = np.cumsum(np.array(fracs, dtype=object))
    lo = next(x for x, c in zip(atoms, cum) if c >= a)
    hi = next(x for x, c in zip(atoms, cum) if c > a)
    return float(lo), float(hi)


def test_c03_elicitability_recovery():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    alphas = [round(0.1 * i, 1) for i in range(1, 10)]
    scores = {a: E.QuantileScore(a) for a in alphas}
    sq = E.SquaredError()
    worst_q, worst_m, flats = 0.0, 0.0, 0
    for _ in range(500):
        atoms, fracs, probs = _exact_law(rng)
        d = DiscreteDistribution(atoms, probs)
        for a in alphas:
            lo, hi = _quantile_oracle(atoms, fracs, a)
            res = E.minimize_expected_score(scores[a], d)
            worst_q = max(worst_q, abs(res.lo - lo), abs(res.hi - hi))
            flats += hi > lo
        mean = math.fsum(x * p for x, p in zip(atoms, probs))
        worst_m = max(worst_m, abs(E.minimize_expected_score(sq, d).rho - mean))
    detail = (f"max |argmin - [q-,q+]|={worst_q:.2e} over 4500 cases ({flats} flat), "
              f"max |argmin - mean|={worst_m:.2e}")
    assert report(3, worst_q <= 1e-4 and worst_m <= 1e-6, detail, t0, 60.0)


# --------------------------------------------------------------------------
# 4. Convex level sets
# --------------------------------------------------------------------------

CLS_FAMILIES = ["var@0.9", "ms@0.9", "mean", "qmix@0.5:c=0.5", "emix:c=0.3"]


def test_c04_convex_level_sets():
    t0 = time.perf_counter()
    counts = {}
    for text in CLS_FAMILIES:
        bad, _ = E.count_cls_violations(RiskMeasureSpec.parse(text), pairs=1000, seed=11, tol=1e-8)
        counts[text] = bad
    witnesses = {}
    for text in ("es@0.5", "es@0.9"):
        w = E.search_cls_violation(RiskMeasureSpec.parse(text), trials=10**4, seed=7, tol=1e-8)
        witnesses[text] = None if w is None else round(w.gap, 6)
    ok = all(v == 0 for v in counts.values()) and all(w is not None for w in witnesses.values())
    detail = f"violations per 1000 pairs {counts}; ES witness gaps {witnesses}"
    assert report(4, ok, detail, t0, 120.0)


# --------------------------------------------------------------------------
# 5. Joint-score counterexample
# --------------------------------------------------------------------------


def test_c05_counterexample():
    t0 = time.perf_counter()
    xs = E.score_grid(46, 0.55, 1.0)
    quad = E.counterexample_curves(-1.5, 1.0, 0.975, 1.0, xs, "logistic", method="quadrature")
    closed = E.counterexample_curves(-1.5, 1.0, 0.975, 1.0, xs, "logistic", method="closed")
    bm, bse, cm, cse = E.counterexample_monte_carlo(quad, -1.5, 1.0, 0.975, n=10**6, seed=5)
    below = bool(np.all(quad.bank < quad.benchmark))
    z_bank = np.abs(bm - quad.bank) / bse
    z_bench = np.abs(cm - quad.benchmark) / cse
    mc_ok = bool(np.all(z_bank <= 3) and np.all(z_bench <= 3))
    closed_ok = bool(np.allclose(quad.bank, closed.bank, rtol=1e-8)
                     and np.allclose(quad.benchmark, closed.benchmark, rtol=1e-8))
    gap = float(np.min(quad.benchmark - quad.bank))
    detail = (f"bank<benchmark at all 46 points={below} (min gap {gap:.3e}); "
              f"max MC z bank={z_bank.max():.2f} bench={z_bench.max():.2f}; closed=quad {closed_ok}")
    assert report(5, below and mc_ok and closed_ok, detail, t0, 60.0)


# --------------------------------------------------------------------------
# 6. Scale insensitivity
# --------------------------------------------------------------------------


def test_c06_scale_insensitivity():
    t0 = time.perf_counter()
    xs = E.score_grid(46, 0.55, 1.0)
    spread = {}
    for k in (1.0, 15.0):
        closed = E.counterexample_curves(-1.5, 1.0, 0.975, k, xs, "logistic", method="closed")
        quad = E.counterexample_curves(-1.5, 1.0, 0.975, k, xs, "logistic", method="quadrature")
        assert abs(closed.spread() - quad.spread()) <= 1e-8 * max(1.0, quad.spread())
        spread[k] = closed.spread()
    shrink = spread[1.0] / spread[15.0]
    # scores scale with the loss, so a k-fold larger loss has a k-fold
    # larger natural unit; reported for context only
    normalized = shrink * 15.0
    detail = (f"spread k=1 {spread[1.0]:.4f}, k=15 {spread[15.0]:.4f}, shrink {shrink:.2f}x "
              f"(needs >= 10x); per unit of loss scale {normalized:.0f}x")
    assert report(6, shrink >= 10.0, detail, t0, 60.0)


# --------------------------------------------------------------------------
# 7. Backtests
# --------------------------------------------------------------------------


def _kupiec_exact_size(T, alpha, size=0.05):
    n = np.arange(T + 1)
    lr = np.array([bt.kupiec_lr(T, int(k), alpha) for k in n])
    return float(stats.binom.pmf(n, T, 1 - alpha)[stats.chi2.sf(lr, 1) < size].sum())


def test_c07_backtests():
    t0 = time.perf_counter()
    lr0 = bt.kupiec_lr(250, 0, 0.99)
    lr_ok = abs(lr0 - (-2 * 250 * math.log(0.99))) <= 1e-9

    zones_ok = True
    for N in range(21):
        cum = sum(Fraction(math.comb(250, j)) * Fraction(1, 100) ** j * Fraction(99, 100) ** (250 - j)
                  for j in range(N + 1))
        expect = "green" if cum < Fraction(95, 100) else "yellow" if cum < Fraction(9999, 10000) else "red"
        zones_ok &= bt.traffic_light(bt.ExceedanceSeries.from_counts(250, N, 0.99)).zone == expect

    exact = _kupiec_exact_size(250, 0.99)
    reps = 1000
    rng = np.random.default_rng(0)
    rej = sum(bt.kupiec_pof(bt.ExceedanceSeries((rng.random(250) < 0.01).astype(int), 0.99)).reject
              for _ in range(reps))
    rate = rej / reps
    band = 3 * math.sqrt(exact * (1 - exact) / reps)
    size_ok = abs(rate - exact) <= band
    detail = (f"LR(250,0.99,0)={lr0:.12f}; zones N=0..20 match={zones_ok}; null rejection "
              f"{rate:.3f} vs exact size {exact:.4f} +/- {band:.4f}"
              f" (inside [0.02, 0.09]: {0.02 <= rate <= 0.09})")
    assert report(7, lr_ok and zones_ok and size_ok, detail, t0, 60.0)


# --------------------------------------------------------------------------
# 8. Basel identity and aggregation axioms
# --------------------------------------------------------------------------


def test_c08_basel_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(1000):
        hist = rng.lognormal(0.0, 1.0, 60) * 10 ** rng.uniform(-2, 6)
        s_t = rng.uniform(3.0, 4.0)
        charge = S.basel2_charge(hist[0], hist, s_t)
        agg = S.aggregate(S.basel2_scenarios(hist), S.basel2_priors(s_t), s_t)
        worst = max(worst, abs(charge - agg) / abs(charge))
    identity_ok = worst <= 1e-12

    axioms_ok = True
    for _ in range(1000):
        m = int(rng.integers(1, 8))
        W = S.PriorSet(rng.dirichlet(np.ones(m), size=int(rng.integers(1, 5))))
        x = rng.normal(0.0, 5.0, m)
        y = x + np.abs(rng.normal(0.0, 1.0, m))
        lam, b = rng.uniform(0.01, 10.0), rng.normal()
        f = lambda v: S.aggregate(v, W)
        tol = 1e-12 * (1 + np.abs(x).max() + abs(b)) * (1 + lam)
        axioms_ok &= f(x) <= f(y) + tol                                  # B1 monotone
        axioms_ok &= abs(f(lam * x) - lam * f(x)) <= tol                 # B2 homogeneous
        axioms_ok &= abs(f(x + b) - (f(x) + b)) <= tol                   # B3 translation
    detail = f"max rel |basel2 - aggregate| over 1000 inputs={worst:.1e}; B1-B3 at 1e-12={axioms_ok}"
    assert report(8, identity_ok and axioms_ok, detail, t0, 10.0)


# --------------------------------------------------------------------------
# 9. IGARCH recovery
# --------------------------------------------------------------------------


def test_c09_igarch_recovery():
    t0 = time.perf_counter()
    truth = F.IGARCHModel(mu=0.0, beta=0.94, sigma0_sq=1e-4)
    betas = []
    for seed in range(20):
        r = F.simulate_igarch(truth, 5000, seed=seed)
        betas.append(F.fit_igarch(r).beta)
    hits = sum(abs(b - 0.94) <= 0.02 for b in betas)
    detail = (f"{hits}/20 within 0.02 (needs >= 18); beta-hat range "
              f"[{min(betas):.4f}, {max(betas):.4f}]")
    assert report(9, hits >= 18, detail, t0, 120.0)


# --------------------------------------------------------------------------
# 10. Model comparison table
# --------------------------------------------------------------------------

REFERENCE_ROWS = {  # alpha: ES1, ES2, MS1, MS2
    0.97: (19956, 21699, 19070, 19868),
    0.975: (20586, 22690, 19715, 20826),
    0.98: (21337, 23918, 20483, 22011),
    0.985: (22275, 25530, 21441, 23564),
    0.99: (23546, 27863, 22738, 25807),
    0.995: (25595, 32049, 24827, 29823),
}
SP500 = os.environ.get("TAILRISK_SP500_CSV")


def test_c10_ratio_surrogate():
    t0 = time.perf_counter()
    truth = F.IGARCHModel(0.0003, 0.94, 1e-4, F.STUDENT_T, nu=5.0, standardized=True)
    r = F.simulate_igarch(truth, 5000, seed=10, omega=1e-6)
    res = F.model_comparison(r)
    ratios = [row.ratio for row in res.rows]
    detail = (f"t5 synthetic, nu-hat={res.model2.nu:.2f}; ratio by alpha "
              + " ".join(f"{100 * a:.1f}%:{100 * q:.1f}%" for a, q in zip(F.TABLE_ALPHAS, ratios))
              + ("" if SP500 else "; golden S&P test skipped (TAILRISK_SP500_CSV unset)"))
    assert report(10, all(q > 0 for q in ratios), detail, t0, 120.0)


@pytest.mark.skipif(not SP500, reason="set TAILRISK_SP500_CSV to a date,price file (1980-01-02..2012-11-26)")
def test_c10_golden_table():
    t0 = time.perf_counter()
    _, prices = read_series(SP500)
    res = F.model_comparison(F.returns_from_prices(prices, "log"), 1_000_000.0)
    worst = 0.0
    for row in res.rows:
        pub = REFERENCE_ROWS[round(row.alpha, 3)]
        got = (row.es1, row.es2, row.ms1, row.ms2)
        worst = max(worst, max(abs(g - p) / p for g, p in zip(got, pub)))
    ok = report("10g", worst <= 0.01, f"golden S&P table, max relative deviation {worst:.4f}", t0, 120.0)
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
