import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import special, stats

from tailrisk import measures as M
from tailrisk.dist import (
    DiscreteDistribution,
    EmpiricalDistribution,
    Normal,
    StudentT,
    TranslatedExpMixture,
    Uniform,
    Weibull,
    mixture,
    point_mass,
    quantile_left,
)
from tailrisk.errors import ConfigError, InfiniteQuantileError, NonIntegrableError
from tailrisk.measures import Jump, RiskMeasureSpec, choquet

from conftest import discrete_laws, levels

NORMAL = Normal(-1.5, 1.0)


def normal_es_oracle(mu, sigma, a):
    z = stats.norm.ppf(a)
    return mu + sigma * stats.norm.pdf(z) / (1 - a)


def all_distortions(alpha=0.7, c=0.3):
    spec = DiscreteDistribution([0.2, 0.7, 1.0], [0.3, 0.5, 0.2])
    return [
        M.identity(), M.var_indicator(alpha), M.right_quantile_indicator(alpha),
        M.es_ramp(alpha), M.ms_indicator(alpha), M.quantile_mix_distortion(alpha, c),
        M.endpoint_step(c), M.minmaxvar(0.25), M.spectrum_distortion(spec),
    ]


class TestDistortion:
    def test_endpoints_and_clamp(self):
        for h in all_distortions():
            assert h(0.0) == 0.0 and h(1.0) == 1.0
            assert h(-0.5) == 0.0 and h(1.5) == 1.0

    def test_monotone(self):
        grid = np.linspace(0, 1, 10_001)
        for h in all_distortions():
            assert np.all(np.diff(h(grid)) >= -1e-15), h

    def test_jump_values_exact(self):
        h = M.quantile_mix_distortion(0.6, 0.25)
        assert h(0.4) == 0.75
        assert h(0.4 - 1e-13) == 0.0
        assert h(0.4 + 1e-13) == 1.0
        v = M.var_indicator(0.6)
        assert v(0.4) == 0.0 and v(0.4 + 1e-12) == 1.0
        r = M.right_quantile_indicator(0.6)
        assert r(0.4) == 1.0

    def test_minmaxvar_formula(self):
        a = 0.25
        h = M.minmaxvar(a)
        x = np.linspace(0.01, 0.99, 50)
        assert np.allclose(h(x), 1 - (1 - x ** (1 / (1 + a))) ** (1 + a), rtol=1e-14)

    def test_validation_rejects(self):
        with pytest.raises(ValueError):
            M.DistortionFunction(lambda x: 1 - x)
        with pytest.raises(ValueError):
            M.DistortionFunction(lambda x: 0.5 * x + 0.5 * (x > 0.5),
                                 jumps=[Jump(0.5, 0.25, 0.9, 0.75)])

    def test_g_dual(self):
        h = M.es_ramp(0.9)
        u = np.linspace(0, 1, 11)
        assert np.allclose(h.g(u), 1 - h(1 - u))


class TestChoquet:
    def test_point_mass(self):
        for h in all_distortions():
            for s in (1.0, 2.5):
                assert choquet(point_mass(3.7), h, s) == pytest.approx(s * 3.7, abs=1e-13)

    def test_mean(self, two_point):
        assert choquet(two_point, M.identity()) == 2.0

    def test_normal_es(self):
        assert choquet(NORMAL, M.es_ramp(0.975)) == pytest.approx(0.838, abs=1e-3)
        assert choquet(NORMAL, M.es_ramp(0.975)) == pytest.approx(
            normal_es_oracle(-1.5, 1.0, 0.975), abs=1e-8)

    def test_discrete_hand_value(self):
        # g-form by hand: g(u) = 1 - h(1 - u) with ES ramp at 0.5
        d = DiscreteDistribution([0.0, 1.0, 4.0], [0.25, 0.5, 0.25])
        g = lambda u: max(0.0, (u - 0.5) / 0.5)
        expect = g(0.25) * 0 + (g(0.75) - g(0.25)) * 1 + (g(1.0) - g(0.75)) * 4
        assert choquet(d, M.es_ramp(0.5)) == pytest.approx(expect, abs=1e-15)

    @given(discrete_laws(max_size=5), st.sampled_from(range(9)),
           st.floats(0.05, 0.95), st.floats(0.0, 1.0))
    def test_closed_equals_quadrature(self, d, which, alpha, c):
        h = all_distortions(alpha, c)[which]
        closed = choquet(d, h, method="closed")
        quad = choquet(d, h, method="quad")
        assert quad == pytest.approx(closed, abs=1e-8, rel=1e-8)

    def test_closed_equals_quadrature_grid_levels(self):
        # levels that sit exactly on cumulative probabilities of the law
        d = DiscreteDistribution([-2.0, 0.0, 1.0, 5.0], [0.1, 0.4, 0.3, 0.2])
        for a in (0.1, 0.5, 0.8):
            for h in all_distortions(a, 0.4):
                assert choquet(d, h, method="quad") == pytest.approx(
                    choquet(d, h, method="closed"), abs=1e-8)

    @pytest.mark.parametrize("h", [M.es_ramp(0.9), M.identity(), M.minmaxvar(0.25)])
    def test_non_integrable(self, h):
        with pytest.raises(NonIntegrableError, match="non-integrable under h"):
            choquet(StudentT(1.0), h)

    def test_slow_tail_still_integrable(self):
        # ES of t(1.5) is finite; compare with the closed-form tail mean
        d = StudentT(1.5)
        assert choquet(d, M.es_ramp(0.9)) == pytest.approx(d.tail_mean(0.9), rel=1e-6)

    def test_heavy_tail_quantile_measures_ok(self):
        assert M.var(StudentT(1.0), 0.975) == pytest.approx(stats.cauchy.ppf(0.975))
        assert M.ms(StudentT(1.5), 0.9) == pytest.approx(stats.t.ppf(0.95, 1.5))

    def test_scale(self, two_point):
        assert choquet(two_point, M.es_ramp(0.5), s=3.0) == 9.0
        with pytest.raises(ValueError):
            choquet(two_point, M.identity(), s=0.0)

    @given(discrete_laws(), st.sampled_from(range(9)),
           st.one_of(st.just(0.0), st.floats(1e-3, 5.0)), st.floats(-10, 10),
           st.floats(0.5, 3.0))
    def test_homogeneity_translation(self, d, which, a, b, s):
        h = all_distortions()[which]
        base = choquet(d, h, s)
        if a == 0:
            moved = point_mass(b)
        else:
            moved = DiscreteDistribution(a * d.atoms + b, d.probs)
        assert choquet(moved, h, s) == pytest.approx(a * base + s * b, abs=1e-9, rel=1e-12)

    @given(discrete_laws(), st.sampled_from(range(9)),
           st.sampled_from(["cube", "exp", "shift"]))
    def test_comonotonic_additivity(self, d, which, phi_name):
        h = all_distortions()[which]
        phi = {"cube": lambda x: x ** 3 / 100, "exp": lambda x: np.exp(x / 10),
               "shift": lambda x: 2 * x + 1}[phi_name]
        x = d.atoms
        y = phi(x)
        fx = d
        fy = DiscreteDistribution(y, d.probs)
        fxy = DiscreteDistribution(x + y, d.probs)
        lhs = choquet(fxy, h)
        assert lhs == pytest.approx(choquet(fx, h) + choquet(fy, h), abs=1e-9, rel=1e-12)


SPECS = ["var@0.9", "es@0.8", "ms@0.7", "mean", "qmix@0.6:c=0.3", "emix:c=0.4",
         "minmaxvar:alpha=0.5", "gspec:0.5=0.25,0.9=0.75"]


class TestFosd:
    @given(discrete_laws(), st.data())
    def test_upward_shift_increases(self, d, data):
        i = data.draw(st.integers(0, len(d) - 1))
        bump = data.draw(st.floats(0.01, 5.0))
        shifted = d.atoms.copy()
        shifted[i:] += bump
        f2 = DiscreteDistribution(shifted, d.probs)
        for text in SPECS:
            rho = RiskMeasureSpec.parse(text)
            assert rho.evaluate(f2) >= rho.evaluate(d) - 1e-12, text

    @given(discrete_laws(), st.data())
    def test_mass_moved_up(self, d, data):
        assume(len(d) >= 2)
        i = data.draw(st.integers(0, len(d) - 2))
        j = data.draw(st.integers(i + 1, len(d) - 1))
        frac = data.draw(st.floats(0.1, 1.0))
        p = d.probs.copy()
        moved = p[i] * frac
        p[i] -= moved
        p[j] += moved
        keep = p > 0
        f2 = DiscreteDistribution(d.atoms[keep], p[keep] / p[keep].sum())
        for text in SPECS:
            rho = RiskMeasureSpec.parse(text)
            assert rho.evaluate(f2) >= rho.evaluate(d) - 1e-12, text


class TestNamedMeasures:
    def test_var(self, two_point):
        assert M.var(NORMAL, 0.975) == pytest.approx(0.460, abs=1e-3)
        assert M.var(point_mass(4.0), 0.3) == 4.0
        assert M.var(two_point, 0.75) == 3.0

    @given(discrete_laws(), st.floats(0.01, 1.0))
    def test_var_is_indicator_choquet(self, d, a):
        assert choquet(d, M.var_indicator(a)) == M.var(d, a)

    def test_es(self):
        assert M.es(NORMAL, 0.975) == pytest.approx(0.838, abs=1e-3)
        assert M.es(point_mass(2.5), 0.3) == 2.5

    def test_es_rockafellar_uryasev_at_atom(self):
        # VaR_0.5 = 1 sits on an atom; tail law puts 0 mass at 1 and all on 3
        d = DiscreteDistribution([1.0, 3.0], [0.5, 0.5])
        assert M.es(d, 0.5) == 3.0
        d = DiscreteDistribution([0.0, 1.0, 3.0], [0.5, 0.3, 0.2])
        # tail above 0.6: mass 0.2 at 1 and 0.2 at 3, renormalized by 0.4
        assert M.es(d, 0.6) == pytest.approx(2.0, abs=1e-15)

    @given(discrete_laws(), st.floats(0.0, 0.99))
    def test_es_is_tail_mean_and_choquet(self, d, a):
        from tailrisk.dist import tail_distribution
        e = M.es(d, a)
        assert e == pytest.approx(tail_distribution(d, a).mean(), abs=1e-10)
        assert e == pytest.approx(choquet(d, M.es_ramp(a)), abs=1e-10)

    def test_es_heavy_tail(self):
        with pytest.raises(NonIntegrableError, match="non-integrable tail"):
            M.es(StudentT(1.0), 0.9)

    def test_ms(self, two_point):
        oracle = -1.5 + special.ndtri(0.9875)
        assert M.ms(NORMAL, 0.975) == pytest.approx(oracle, abs=1e-12)
        assert M.ms(NORMAL, 0.975) == pytest.approx(0.741, abs=1e-3)
        assert M.ms(two_point, 0.5) == 3.0

    def test_ms_var_identity_1000_laws(self):
        rng = np.random.default_rng(5)
        alphas = np.linspace(0.0, 0.98, 50)
        for _ in range(1000):
            k = rng.integers(1, 7)
            atoms = np.sort(rng.choice(np.arange(-10, 11), size=k, replace=False)).astype(float)
            p = rng.integers(1, 6, size=k).astype(float)
            d = DiscreteDistribution(atoms, p / p.sum())
            for a in alphas:
                assert M.ms(d, a) == M.var(d, (1 + a) / 2)

    @given(discrete_laws(), st.floats(0.0, 0.99))
    def test_ms_is_tail_median(self, d, a):
        from tailrisk.dist import tail_distribution
        assert M.ms(d, a) == quantile_left(tail_distribution(d, a), 0.5)

    def test_mean(self, two_point):
        assert M.mean(Normal(0.7, 3.0)) == 0.7
        assert M.mean(two_point) == 2.0
        assert M.mean(Weibull(1.0, 2.0)) == pytest.approx(special.gamma(2.0) * 2.0)
        with pytest.raises(NonIntegrableError):
            M.mean(StudentT(0.8))

    def test_quantile_mix(self, two_point):
        assert M.quantile_mix(two_point, 0.5, 0.5) == 2.0
        assert M.quantile_mix(two_point, 0.5, 1.0) == 1.0
        for c in (0.0, 0.3, 1.0):
            assert M.quantile_mix(Normal(0, 1), 0.5, c) == 0.0

    @given(discrete_laws(), st.floats(0.05, 0.95), st.floats(0.0, 1.0))
    def test_quantile_mix_is_choquet(self, d, a, c):
        assert choquet(d, M.quantile_mix_distortion(a, c)) == pytest.approx(
            M.quantile_mix(d, a, c), abs=1e-12)

    def test_endpoint_mix(self, two_point):
        assert M.endpoint_mix(two_point, 0.5) == 2.0
        assert M.endpoint_mix(point_mass(7.0), 0.2) == 7.0
        d = EmpiricalDistribution(np.arange(10.0))
        assert M.endpoint_mix(d, 0.25) == pytest.approx(6.75)
        assert M.endpoint_mix(Uniform(1.0, 3.0), 0.5) == 2.0
        with pytest.raises(InfiniteQuantileError, match="infinite endpoint"):
            M.endpoint_mix(NORMAL, 0.5)

    @given(discrete_laws(), st.floats(0.0, 1.0))
    def test_endpoint_mix_is_choquet(self, d, c):
        assert choquet(d, M.endpoint_step(c)) == pytest.approx(M.endpoint_mix(d, c), abs=1e-12)

    def test_gen_spectral(self, two_point):
        delta = DiscreteDistribution([0.25, 0.75], [0.5, 0.5])
        assert M.gen_spectral(two_point, delta) == 2.0
        for a in (0.3, 0.9):
            assert M.gen_spectral(NORMAL, point_mass(a)) == M.var(NORMAL, a)
        with pytest.raises(InfiniteQuantileError):
            M.gen_spectral(NORMAL, DiscreteDistribution([0.5, 1.0], [0.5, 0.5]))

    @given(discrete_laws())
    def test_gen_spectral_is_choquet(self, d):
        delta = DiscreteDistribution([0.2, 0.7, 1.0], [0.3, 0.5, 0.2])
        assert choquet(d, M.spectrum_distortion(delta)) == pytest.approx(
            M.gen_spectral(d, delta), abs=1e-12)

    def test_spectral_discretization_converges_to_es(self):
        d = Normal(0.0, 1.0)
        delta = M.discretize_spectrum(lambda u: np.ones_like(u), grid=10**4, support=(0.95, 1.0))
        assert M.gen_spectral(d, delta) == pytest.approx(M.es(d, 0.95), abs=1e-3)

    def test_minmaxvar_closed_vs_quad(self):
        h = M.minmaxvar(0.25)
        v_quad = choquet(Normal(0.0, 1.0), h)
        xs = np.sort(Normal(0.0, 1.0).sample(2 * 10**5, seed=8))
        v_emp = choquet(EmpiricalDistribution(xs), h)
        assert v_quad > 0
        assert v_quad == pytest.approx(v_emp, abs=0.01)


class TestTranslatedExpFamily:
    @pytest.mark.parametrize("n", [10.0, 1e2, 1e3, 1e4])
    def test_es_constant(self, n):
        d = TranslatedExpMixture(0.0, 1.0, 1.0, n)
        assert M.es(d, 0.0) == pytest.approx(2.0, abs=1e-12)
        assert choquet(d, M.identity(), method="quad") == pytest.approx(2.0, abs=1e-6)

    @pytest.mark.parametrize("n", [10.0, 1e2, 1e3, 1e4])
    def test_ms_closed_form(self, n):
        d = TranslatedExpMixture(0.0, 1.0, 1.0, n)
        b = d.beta
        # median of the exponential part after the atom takes beta of the mass
        oracle = -math.log(1 - 1 / (2 * (1 - b)))
        assert M.ms(d, 0.0) == pytest.approx(oracle, abs=1e-12)

    def test_ms_decreasing_to_exponential_median(self):
        vals = [M.ms(TranslatedExpMixture(0.0, 1.0, 1.0, n), 0.0) for n in (10, 1e2, 1e3, 1e4)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(math.log(2), abs=1e-3)


class TestWeibullTail:
    def test_es_below_ms_beyond_threshold(self):
        # the 0.9-tail of this law is Weibull(4); its mean is below its median
        d = mixture([point_mass(-1.0), Weibull(4.0, 1.0)], [0.9, 0.1])
        es, ms = M.es(d, 0.9), M.ms(d, 0.9)
        assert es == pytest.approx(special.gamma(1.25), abs=1e-8)
        assert ms == pytest.approx(math.log(2) ** 0.25, abs=1e-9)
        assert es < ms

    def test_tail_mean_median_crossover_near_3_44(self):
        # Weibull mean minus median changes sign near shape 3.44
        f = lambda k: special.gamma(1 + 1 / k) - math.log(2) ** (1 / k)
        assert f(3.3) > 0 > f(3.6)


class TestSpecGrammar:
    @pytest.mark.parametrize("text", SPECS + ["es@0.975:scale=2", "var@0.99"])
    def test_round_trip(self, text):
        spec = RiskMeasureSpec.parse(text)
        again = RiskMeasureSpec.parse(str(spec))
        assert again == spec
        d = DiscreteDistribution([0.0, 1.0, 4.0], [0.2, 0.5, 0.3])
        assert again.evaluate(d) == spec.evaluate(d)

    @given(st.sampled_from(["var", "es", "ms"]), st.floats(0.001, 0.999), st.floats(0.1, 10))
    def test_round_trip_property(self, kind, a, s):
        spec = RiskMeasureSpec(kind, alpha=a, scale=s)
        assert RiskMeasureSpec.parse(str(spec)) == spec

    def test_values(self):
        assert M.parse_measure("es@0.975").evaluate(NORMAL) == pytest.approx(0.838, abs=1e-3)
        assert M.parse_measure("es@0.975:scale=2").evaluate(NORMAL) == pytest.approx(
            2 * M.es(NORMAL, 0.975))
        assert M.parse_measure("minmaxvar:alpha=0.25").evaluate(NORMAL) == pytest.approx(
            choquet(NORMAL, M.minmaxvar(0.25)))

    @pytest.mark.parametrize("bad", ["foo@0.5", "var", "mean@0.5", "qmix@0.5", "var@1.5",
                                     "es@0.9:c=0.2", "var@x", "emix:c=2", "es@0.9:scale=-1",
                                     "gspec", "gspec:0=1"])
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            RiskMeasureSpec.parse(bad)
