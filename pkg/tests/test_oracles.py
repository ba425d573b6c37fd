import math

import numpy as np
import pytest

from spcauchy import (
    SpCauchy,
    integrate_adaptive,
    j_closed_low_d,
    kl_closed_low_d,
    kl_monte_carlo,
    kl_reference,
    kl_series,
    z_of_rho,
)
from spcauchy.errors import MaxDepthExceeded, SpCauchyError
from spcauchy.klcore import _j_integrand_raw


def north(d):
    mu = np.zeros(d)
    mu[0] = 1.0
    return mu


class TestAdaptiveIntegration:
    def test_polynomial(self):
        assert integrate_adaptive(lambda t: t * t, 0.0, 1.0, 1e-12) == pytest.approx(
            1.0 / 3.0, abs=1e-12
        )

    def test_exponential(self):
        assert integrate_adaptive(math.exp, 0.0, 1.0, 1e-12) == pytest.approx(
            math.e - 1.0, abs=1e-12
        )

    def test_core_integrand_recovers_closed_form(self):
        z = 0.5
        value = integrate_adaptive(
            lambda t: float(_j_integrand_raw(3, z, 1.0 - z, np.array([t]))[0]), 0.0, 1.0, 1e-12
        )
        assert value == pytest.approx(-1.0 + 2.0 * math.log(2.0), abs=1e-10)

    def test_depth_exhaustion(self):
        with pytest.raises(MaxDepthExceeded):
            integrate_adaptive(lambda t: t**-0.5 if t > 0 else 0.0, 0.0, 1.0, 1e-14)


class TestReference:
    def test_closed_form_agreement(self):
        assert abs(kl_reference(4, 0.6) - kl_closed_low_d(4, 0.6).value) < 1e-11

    def test_series_agreement_extreme_dimension(self):
        v = kl_reference(2048, 0.25)
        s = kl_series(2048, 0.25).value
        assert math.isfinite(v)
        assert abs(v - s) / abs(v) < 1e-9

    def test_zero(self):
        assert kl_reference(17, 0.0) == 0.0

    def test_node_doubling_self_consistency(self):
        dims = (2, 3, 4, 5, 8, 16, 32, 64, 128, 256, 512, 1024, 2048)
        rhos = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95)
        worst = 0.0
        for d in dims:
            for rho in rhos:
                a = kl_reference(d, rho, nodes=512)
                b = kl_reference(d, rho, nodes=1024)
                worst = max(worst, abs(a - b) / max(1.0, abs(a)))
        assert worst < 1e-10

    def test_high_rho_cross_check_runs(self):
        # rho > 0.99 triggers the long-series arbitration when it converges
        assert math.isfinite(kl_reference(6, 0.995))


class TestMonteCarlo:
    def test_uniform_is_exactly_zero(self, rng):
        est = kl_monte_carlo(SpCauchy(north(4), 0.0), 5000, rng)
        assert est.mean == 0.0 and est.stderr == 0.0

    def test_matches_closed_form(self, rng):
        est = kl_monte_carlo(SpCauchy(north(3), 0.5), 1_000_000, rng)
        truth = 2.0 * (math.log(1.0 / 3.0) + j_closed_low_d(3, z_of_rho(0.5)))
        assert abs(est.mean - truth) < 4.0 * est.stderr

    def test_stderr_scaling(self):
        dist = SpCauchy(north(5), 0.6)
        small = kl_monte_carlo(dist, 10_000, np.random.default_rng(3))
        large = kl_monte_carlo(dist, 1_000_000, np.random.default_rng(4))
        ratio = small.stderr / large.stderr
        assert 8.0 < ratio < 12.0  # within 20% of the sqrt(100) = 10 factor

    def test_minimum_sample_size(self, rng):
        with pytest.raises(SpCauchyError):
            kl_monte_carlo(SpCauchy(north(3), 0.5), 10, rng)
