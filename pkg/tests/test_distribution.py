import math

import numpy as np
import pytest
from scipy import stats

from spcauchy import (
    SpCauchy,
    integrate_adaptive,
    log_density,
    marginal_cos_cdf,
    marginal_cos_density,
    sample,
    sample_uniform_sphere,
    stereographic_project,
)
from spcauchy.errors import AtPole, DimensionMismatch, InvalidConcentration


def north(d):
    mu = np.zeros(d)
    mu[0] = 1.0
    return mu


class TestParameters:
    def test_mu_normalized_on_construction(self):
        dist = SpCauchy(np.array([0.0, 3.0, 4.0]), 0.2)
        np.testing.assert_allclose(dist.mu, [0.0, 0.6, 0.8], rtol=1e-15)

    @pytest.mark.parametrize("rho", [1.0, -0.01, 2.0])
    def test_rho_bounds(self, rho):
        with pytest.raises(InvalidConcentration):
            SpCauchy(north(3), rho)


class TestLogDensity:
    def test_uniform_case_is_exactly_zero(self, rng):
        dist = SpCauchy(north(5), 0.0)
        x = sample_uniform_sphere(5, rng, 100)
        assert np.all(log_density(dist, x) == 0.0)

    @pytest.mark.parametrize("d,rho", [(3, 0.5), (8, 0.9), (2, 0.25)])
    def test_value_at_mode(self, d, rho):
        dist = SpCauchy(north(d), rho)
        expected = (d - 1) * math.log((1 + rho) / (1 - rho))
        assert abs(log_density(dist, north(d)) - expected) < 1e-12

    def test_equator_value(self):
        # d=3, rho=0.5, <mu, x> = 0:  2*log(0.75/1.25)
        dist = SpCauchy(north(3), 0.5)
        x = np.array([0.0, 1.0, 0.0])
        assert abs(log_density(dist, x) - 2.0 * math.log(0.6)) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            log_density(SpCauchy(north(3), 0.1), np.ones(4) / 2.0)

    @pytest.mark.parametrize("d", [2, 3, 5, 8])
    @pytest.mark.parametrize("rho", [0.0, 0.3, 0.9])
    def test_normalization_integral(self, d, rho):
        # integrate exp(log_density) against the uniform measure through the
        # cosine marginal; the angular normalizer is the analytic gamma ratio
        dist = SpCauchy(north(d), rho)
        c_d = math.exp(math.lgamma(d / 2.0) - math.lgamma((d - 1) / 2.0)) / math.sqrt(math.pi)

        def integrand(theta):
            x = np.zeros(d)
            x[0] = math.cos(theta)
            if d > 1:
                x[1] = math.sin(theta)
            weight = (d - 2.0) * math.log(max(math.sin(theta), 1e-300)) if d > 2 else 0.0
            return math.exp(weight + log_density(dist, x))

        total = c_d * integrate_adaptive(integrand, 0.0, math.pi, 1e-10)
        assert abs(total - 1.0) < 1e-8

    def test_mode_is_maximum(self, rng):
        for rho in (0.3, 0.9):
            dist = SpCauchy(north(6), rho)
            x = sample_uniform_sphere(6, rng, 10_000)
            assert np.max(log_density(dist, x)) < log_density(dist, north(6))

    def test_rotational_symmetry(self, rng):
        d = 5
        dist = SpCauchy(north(d), 0.7)
        x = sample_uniform_sphere(d, rng, 200)
        # random rotation of the orthogonal complement of mu fixes mu
        block = np.linalg.qr(rng.standard_normal((d - 1, d - 1)))[0]
        rot = np.eye(d)
        rot[1:, 1:] = block
        np.testing.assert_allclose(
            log_density(dist, x @ rot.T), log_density(dist, x), atol=1e-12
        )


class TestSampling:
    def test_fixed_seed_is_byte_stable(self):
        dist = SpCauchy(north(8), 0.7)
        a = sample(dist, np.random.default_rng(11), 64)
        b = sample(dist, np.random.default_rng(11), 64)
        assert np.array_equal(a, b)

    def test_uniform_at_zero_rho(self, rng):
        d = 3
        dist = SpCauchy(north(d), 0.0)
        draws = sample(dist, rng, 100_000)
        res = stats.kstest(draws @ dist.mu, lambda t: marginal_cos_cdf(d, 0.0, t))
        assert res.pvalue > 0.01

    def test_concentrated_mean_direction(self, rng):
        dist = SpCauchy(north(3), 0.9)
        draws = sample(dist, rng, 100_000)
        mean_dir = draws.mean(axis=0)
        mean_dir /= np.linalg.norm(mean_dir)
        angle = math.degrees(math.acos(np.clip(mean_dir @ dist.mu, -1, 1)))
        assert angle < 0.5

    @pytest.mark.parametrize("d", [3, 8])
    @pytest.mark.parametrize("rho", [0.25, 0.7, 0.9])
    def test_sampler_matches_marginal(self, d, rho):
        # the central pushforward property: <mu, z> follows the analytic
        # cosine marginal of the law the Moebius map is supposed to produce
        rng = np.random.default_rng(97 + d)
        dist = SpCauchy(north(d), rho)
        draws = sample(dist, rng, 100_000)
        res = stats.kstest(draws @ dist.mu, lambda t: marginal_cos_cdf(d, rho, t))
        assert res.pvalue > 0.01


class TestMarginal:
    def test_uniform_d3_is_flat(self):
        t = np.linspace(-0.99, 0.99, 11)
        np.testing.assert_allclose(marginal_cos_density(3, 0.0, t), 0.5, rtol=1e-9)

    def test_uniform_d4_semicircle(self):
        t = np.linspace(-0.95, 0.95, 11)
        expected = 2.0 / np.pi * np.sqrt(1.0 - t * t)
        np.testing.assert_allclose(marginal_cos_density(4, 0.0, t), expected, rtol=1e-9)

    def test_mode_position_interior(self):
        t = np.linspace(-0.999, 0.999, 4001)
        dens = marginal_cos_density(8, 0.7, t)
        t_star = t[np.argmax(dens)]
        assert 0.0 < t_star < 1.0

    @pytest.mark.parametrize("d,rho", [(2, 0.5), (3, 0.9), (8, 0.7)])
    def test_integrates_to_one(self, d, rho):
        def f(theta):
            return float(marginal_cos_density(d, rho, math.cos(theta))) * math.sin(theta)

        # integrate in theta to absorb the d=2 endpoint singularity; end
        # slivers are added by rectangle rule (O(pad^2) error) so the
        # integrand never sees the ulp noise of cos(theta) next to +/-1
        pad = 1e-5
        total = integrate_adaptive(f, pad, math.pi - pad, 1e-9)
        total += pad * (f(pad) + f(math.pi - pad))
        assert abs(total - 1.0) < 1e-8

    def test_cdf_monotone_and_normalized(self):
        t = np.linspace(-1.0, 1.0, 256)
        cdf = marginal_cos_cdf(5, 0.6, t)
        assert cdf[0] < 1e-12 and abs(cdf[-1] - 1.0) < 1e-12
        assert np.all(np.diff(cdf) >= 0)


class TestStereographic:
    def test_antipode_to_origin(self):
        pole = north(4)
        np.testing.assert_allclose(stereographic_project(-pole, pole), 0.0, atol=1e-15)

    def test_equator_to_unit_sphere(self, rng):
        pole = north(5)
        x = sample_uniform_sphere(5, rng, 50)
        x[:, 0] = 0.0
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        norms = np.linalg.norm(stereographic_project(x, pole), axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)

    def test_pole_rejected(self):
        pole = north(3)
        with pytest.raises(AtPole):
            stereographic_project(pole, pole)

    def test_uniform_projects_to_student_t(self, rng):
        # rho = 0 pushed through the projection has radial density
        # proportional to r^(d-2) (1+r^2)^-(d-1); CDF by 1-d integration
        d = 3
        draws = sample_uniform_sphere(d, rng, 100_000)
        keep = 1.0 - draws[:, 0] > 5e-21
        radii_sq = np.sum(stereographic_project(draws[keep], north(d)) ** 2, axis=1)

        # integrate the radial density numerically in the substituted angle
        # psi = 2*arctan(r), where r^(d-2)(1+r^2)^-(d-1) dr maps to a
        # sin(psi)^(d-2) profile and the infinite tail becomes finite
        psi = np.linspace(0.0, np.pi, 8193)
        dens = np.sin(psi) ** (d - 2)
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(psi))))
        cum /= cum[-1]

        def cdf_r2(s):
            return np.interp(2.0 * np.arctan(np.sqrt(np.maximum(s, 0.0))), psi, cum)

        # at d=3 the radial CDF collapses to s/(1+s); guards the numeric oracle
        probe = np.array([0.5, 1.0, 2.0, 5.0])
        np.testing.assert_allclose(cdf_r2(probe), probe / (1.0 + probe), atol=1e-3)
        assert stats.kstest(radii_sq, cdf_r2).pvalue > 0.01
