import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from epi_lab._numerics import composite_integrate
from epi_lab.densities import (
    DEFAULT_CONFIG,
    Gaussian,
    Grid,
    Mixture,
    QuadratureConfig,
    QuarticGibbs,
    absolute_moment,
    bakry_emery_constant,
    check_bakry_emery,
    check_log_concave,
    curvature_region_mass,
    gaussian_smooth,
    mixture_counterexample,
    read_grid_csv,
    sum_density,
    to_grid,
    write_grid_csv,
)
from epi_lab.entropy import differential_entropy
from epi_lab.errors import (
    ConfigurationError,
    DomainError,
    HypothesisError,
    NonSmoothPointError,
    UnsupportedOperationError,
)

# frozen from tests/oracles.py (mpmath curvature roots + exact mixture cdf)
REGION_MASS = {0.1: 0.885074013092503, 0.03: 0.963946984783033, 0.01: 0.9882845424697813,
               0.003: 0.9966354061825629, 0.001: 0.9989176146398785}

ANALYTIC = ["g05", "g1", "g4", "lap", "q005", "q02", "mix01", "mix03"]


class TestExamples:
    def test_pdf(self, family):
        assert family["g1"].pdf(0.0) == pytest.approx(0.3989423, abs=1e-7)
        assert mixture_counterexample(0.5).pdf(0.0) == pytest.approx(0.3989423, abs=1e-7)
        assert family["lap"].pdf(0.0) == 0.5

    def test_cdf(self, family):
        assert family["g1"].cdf(0.0) == 0.5
        assert family["lap"].cdf(math.log(2.0)) == pytest.approx(0.75, abs=1e-15)
        assert family["q01"].cdf(0.0) == pytest.approx(0.5, abs=1e-14)

    def test_quantile(self, family):
        assert family["g1"].quantile(0.5) == 0.0
        assert family["lap"].quantile(0.75) == pytest.approx(0.6931472, abs=1e-7)
        assert family["g1"].quantile(0.975) == pytest.approx(special.ndtri(0.975), abs=1e-9)
        assert family["g1"].quantile(0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_quantile_domain(self, family):
        for u in (0.0, 1.0, -0.1, float("nan")):
            with pytest.raises(DomainError):
                family["g1"].quantile(u)

    def test_pdf_rejects_nonfinite(self, family):
        with pytest.raises(DomainError):
            family["g1"].pdf(float("inf"))

    def test_log_curvature(self, family):
        assert family["g4"].log_pdf_second_derivative(3.0) == pytest.approx(-0.25)
        x = np.array([-2.0, 0.5, 3.0])
        assert np.allclose(family["q01"].log_pdf_second_derivative(x), -(1 + 1.2 * x * x))
        assert -2.2 < mixture_counterexample(1e-3).log_pdf_second_derivative(0.0) < -1.8

    def test_log_curvature_errors(self, family):
        with pytest.raises(NonSmoothPointError):
            family["lap"].log_pdf_second_derivative(0.0)
        assert family["lap"].log_pdf_second_derivative(1.0) == 0.0
        with pytest.raises(UnsupportedOperationError):
            to_grid(family["g1"]).log_pdf_second_derivative(0.0)

    def test_mixture_curvature_matches_finite_difference(self, family):
        d = family["mix01"]
        x, h = 1.3, 1e-4
        fd = (d.log_pdf(x + h) - 2 * d.log_pdf(x) + d.log_pdf(x - h)) / h**2
        assert d.log_pdf_second_derivative(x) == pytest.approx(fd, rel=1e-5)


class TestMoments:
    @pytest.mark.parametrize("s", [0.5, 1.0, 4.0])
    def test_gaussian_variance(self, s):
        assert absolute_moment(Gaussian(s), 2) == pytest.approx(s, rel=1e-14)

    @given(st.floats(0.001, 0.999))
    def test_mixture_unit_variance(self, eps):
        assert mixture_counterexample(eps).second_moment == pytest.approx(1.0, rel=1e-12)

    def test_mixture_three_halves_limit(self):
        limit = absolute_moment(Gaussian(0.5), 1.5)
        gaps = [abs(mixture_counterexample(e).absolute_moment(1.5) - limit) for e in (0.1, 0.01, 0.001)]
        # the heavy component contributes O(eps^{1/4}), so convergence is slow
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] / gaps[0] == pytest.approx((0.001 / 0.1) ** 0.25, rel=0.2)

    @pytest.mark.parametrize("p", [0.5, 1.5, 2.0, 3.0])
    def test_quadrature_moments(self, family, p):
        for key in ("lap", "q01"):
            d = family[key]
            ref, _ = integrate.quad(lambda x: abs(x) ** p * float(d.pdf(x)), -np.inf, np.inf, epsabs=1e-13, limit=200)
            assert d.absolute_moment(p) == pytest.approx(ref, rel=1e-7)

    def test_moment_order_positive(self, family):
        with pytest.raises(DomainError):
            family["g1"].absolute_moment(0.0)


class TestMixture:
    def test_collapse(self, family):
        x = np.linspace(-6, 6, 101)
        assert np.allclose(mixture_counterexample(0.5).pdf(x), family["g1"].pdf(x), rtol=1e-14)

    def test_component_variances(self):
        comps = mixture_counterexample(0.1).components
        assert comps[0] == pytest.approx((0.1, 5.0))
        assert comps[1] == pytest.approx((0.9, 5.0 / 9.0))

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.5, 1.5])
    def test_domain(self, eps):
        with pytest.raises(DomainError):
            mixture_counterexample(eps)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(DomainError):
            Mixture(((0.5, 1.0), (0.4, 2.0)))

    def test_counterexample_eps(self):
        assert mixture_counterexample(0.03).counterexample_eps == 0.03
        assert Mixture(((0.3, 1.0), (0.7, 2.0))).counterexample_eps is None


class TestQuartic:
    @pytest.mark.parametrize("a", [0.0, 0.001, 0.05, 0.1, 0.2, 1.0, 25.0])
    def test_normalizer_bessel(self, a):
        # int exp(-x^2/2 - a x^4) = 1/2 sqrt(b/a) e^z K_{1/4}(z), z = b^2/(8a), b = 1/2
        if a == 0:
            ref = math.sqrt(2 * math.pi)
        else:
            ref = 0.5 * math.sqrt(0.5 / a) * special.kve(0.25, 1 / (32 * a))
        assert math.exp(QuarticGibbs(a).log_normalizer) == pytest.approx(ref, rel=1e-10)

    def test_bakry_emery_one(self, family):
        for key in ("q005", "q01", "q02"):
            assert bakry_emery_constant(family[key]) >= 1.0
            check_bakry_emery(family[key], 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            QuarticGibbs(-0.1)


class TestInvariants:
    @pytest.mark.parametrize("key", ANALYTIC)
    def test_cdf_quantile_roundtrip(self, family, key):
        d = family[key]
        u = np.random.default_rng(7).uniform(1e-6, 1 - 1e-6, 1000)
        assert np.max(np.abs(d.cdf(d.quantile(u)) - u)) <= 1e-8

    @pytest.mark.parametrize("key", ANALYTIC)
    def test_quantile_cdf_roundtrip(self, family, key):
        d = family[key]
        x = np.linspace(-3, 3, 41) * d.std
        assert np.max(np.abs(d.quantile(d.cdf(x)) - x)) <= 1e-8

    @pytest.mark.parametrize("key", ANALYTIC)
    def test_unit_mass(self, family, key):
        d = family[key]
        r = d.support_radius()
        mass = composite_integrate(d.pdf, -r, r, d.min_scale / 8, breakpoints=[0.0])
        assert 1 - 1e-7 <= mass <= 1 + 1e-12

    @pytest.mark.parametrize("key", ANALYTIC)
    def test_cdf_monotone_and_limits(self, family, key):
        d = family[key]
        x = np.linspace(-d.support_radius(), d.support_radius(), 2001)
        F = d.cdf(x)
        assert np.all(np.diff(F) >= 0)
        assert F[0] < 1e-12 and F[-1] > 1 - 1e-12
        assert np.allclose(d.sf(x), 1 - F, atol=1e-14)

    @pytest.mark.parametrize("key", ANALYTIC)
    def test_centered(self, family, key):
        assert abs(to_grid(family[key]).mean()) < 1e-8

    @pytest.mark.parametrize("key", ["g1", "lap", "q02", "mix01"])
    @pytest.mark.parametrize("k", [0.5, 2.0])
    def test_scaling(self, family, key, k):
        d = family[key]
        x = np.array([-1.0, 0.3, 2.0])
        assert np.allclose(d.scaled(k).pdf(x), d.pdf(x / k) / k, rtol=1e-12)
        assert np.allclose(d.scaled(k).cdf(x), d.cdf(x / k), rtol=1e-12)

    def test_region_mass_matches_oracle(self):
        for eps, ref in REGION_MASS.items():
            assert curvature_region_mass(mixture_counterexample(eps)) == pytest.approx(ref, abs=1e-9)

    def test_region_mass_trend(self):
        masses = [curvature_region_mass(mixture_counterexample(e)) for e in sorted(REGION_MASS, reverse=True)]
        assert all(b >= a for a, b in zip(masses[:-1], masses[1:]))
        assert masses[-1] > 0.99

    def test_region_mass_extremes(self):
        assert curvature_region_mass(Gaussian(0.5)) == pytest.approx(1.0)
        assert curvature_region_mass(Gaussian(2.0)) == 0.0


class TestGrids:
    def test_gaussian_smooth_gaussian(self, family):
        g = gaussian_smooth(family["g1"], 1.0)
        x = np.linspace(-8, 8, 801)
        assert np.max(np.abs(g.pdf(x) - Gaussian(2.0).pdf(x))) <= 1e-6

    @pytest.mark.parametrize("a,b", [(0.5, 0.5), (2.0, 0.3)])
    def test_gaussian_smooth_adds_variance(self, a, b):
        g = gaussian_smooth(Gaussian(a), b)
        x = np.linspace(-6, 6, 301)
        assert np.max(np.abs(g.pdf(x) - Gaussian(a + b).pdf(x))) <= 1e-6

    def test_smoothing_raises_entropy(self, family):
        assert differential_entropy(gaussian_smooth(family["lap"], 0.01)) >= 1.693147

    def test_smoothing_moment(self, family):
        g = gaussian_smooth(family["mix01"], 0.1)
        assert g.second_moment == pytest.approx(1.1, abs=1e-4)
        assert g.cdf(g.hi) == pytest.approx(1.0, abs=1e-7)

    def test_smoothing_domain(self, family):
        with pytest.raises(DomainError):
            gaussian_smooth(family["g1"], 0.0)

    def test_to_grid(self, family):
        g = to_grid(family["g1"])
        assert g.cdf(g.hi) == pytest.approx(1.0, abs=1e-10)
        assert to_grid(mixture_counterexample(1e-3)).hi >= 12 * math.sqrt(500.0)

    def test_to_grid_samples_exact(self, family):
        # Unit-mass renormalization rescales the samples by the trapezoid mass of the
        # kinked Laplace density, 1 + h^2/12 + ..., which is ~1e-7 at the default grid.
        lap = to_grid(family["lap"])
        assert np.max(np.abs(lap.values - family["lap"].pdf(lap.nodes))) <= 1e-9

    def test_grid_outside_support(self, family):
        g = to_grid(family["g1"])
        assert g.pdf(g.hi + 1.0) == 0.0
        assert g.cdf(g.lo - 1.0) == 0.0 and g.cdf(g.hi + 1.0) == 1.0

    def test_grid_cdf_quantile(self, family):
        g = to_grid(family["q01"])
        u = np.linspace(0.01, 0.99, 99)
        assert np.max(np.abs(g.cdf(g.quantile(u)) - u)) <= 1e-8

    def test_grid_scaled_exact(self, family):
        g = to_grid(family["g1"], QuadratureConfig(grid_points=2**12))
        s = g.scaled(2.0)
        assert s.lo == 2 * g.lo and s.hi == 2 * g.hi
        assert s.second_moment == pytest.approx(4 * g.second_moment, rel=1e-14)

    def test_grid_rejects_bad_samples(self):
        with pytest.raises(DomainError):
            Grid(-1.0, 1.0, [0.0, 0.0, 0.0])
        with pytest.raises(DomainError):
            Grid(-1.0, 1.0, [1.0, -1.0, 1.0])
        with pytest.raises(DomainError):
            Grid(1.0, -1.0, [1.0, 1.0])

    def test_csv_roundtrip(self, tmp_path, family):
        g = gaussian_smooth(family["lap"], 0.5, QuadratureConfig(grid_points=2**12))
        path = tmp_path / "g.csv"
        write_grid_csv(g, path)
        head = path.read_text(encoding="utf-8").splitlines()[0]
        assert head.startswith("# epi-lab grid v1, lo=") and head.endswith(f"n={g.n}")
        back = read_grid_csv(path)
        assert back.lo == g.lo and back.hi == g.hi
        assert np.allclose(back.values, g.values, rtol=1e-14, atol=0)

    def test_csv_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,pdf\n0,1\n", encoding="utf-8")
        with pytest.raises(DomainError):
            read_grid_csv(path)

    def test_sum_density_resolution_error(self):
        with pytest.raises(ConfigurationError, match="grid_points"):
            sum_density([mixture_counterexample(1e-4), Gaussian(1e-4)], QuadratureConfig(grid_points=2**10))


class TestConfig:
    @pytest.mark.parametrize("n", [2**9, 3000, 2**10 + 2])
    def test_grid_points_power_of_two(self, n):
        with pytest.raises(ConfigurationError):
            QuadratureConfig(grid_points=n)

    def test_defaults(self):
        assert DEFAULT_CONFIG.grid_points == 2**16
        assert DEFAULT_CONFIG.support_radius_multiplier == 12
        assert DEFAULT_CONFIG.cdf_bisection_tol == 1e-12


def test_log_concavity_checks(family):
    check_log_concave(family["lap"])
    with pytest.raises(HypothesisError):
        check_bakry_emery(family["g2"], 1.0)
    with pytest.raises(HypothesisError):
        check_log_concave(Mixture(((0.5, 0.1), (0.5, 10.0))))
