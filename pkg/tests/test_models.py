import math

import numpy as np
import pytest

from censtail import (
    Burr,
    Frechet,
    ModelSpec,
    Pareto,
    RngStream,
    burr_quantile,
    frechet_quantile,
    gamma2_from_p,
    hill,
    p_hat,
    pareto_quantile,
    sample_censored,
    sort_with_concomitants,
    upper_uncensored_proportion,
)
from censtail.errors import DomainError


class TestBurr:
    def test_quantile_at_zero(self):
        assert burr_quantile(0.0, 0.4, 0.25) == 0.0

    def test_median_matches_cdf_round_trip(self):
        x = burr_quantile(0.5, 0.4, 0.25)
        assert x == pytest.approx((2**1.6 - 1) ** 0.25, abs=1e-12)
        assert Burr(0.4, 0.25).cdf(x) == pytest.approx(0.5, abs=1e-12)

    def test_round_trip_on_grid(self):
        grid = np.linspace(0.0, 0.999, 200)
        for gamma1, eta in ((0.4, 0.25), (0.6, 0.25), (1.5, 2.0)):
            model = Burr(gamma1, eta)
            assert np.allclose(model.cdf(model.quantile(grid)), grid, atol=1e-12)

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            Burr(0.0, 0.25)
        with pytest.raises(DomainError):
            Burr(0.4, -1.0)
        with pytest.raises(DomainError):
            burr_quantile(1.0, 0.4, 0.25)
        with pytest.raises(DomainError):
            burr_quantile(-0.1, 0.4, 0.25)


class TestFrechet:
    def test_unit_quantile_at_exp_minus_one(self):
        assert frechet_quantile(math.exp(-1.0), 0.6) == pytest.approx(1.0, abs=1e-12)

    def test_median(self):
        assert frechet_quantile(0.5, 0.6) == pytest.approx(
            math.log(2) ** -0.6, abs=1e-12
        )

    def test_round_trip_on_grid(self):
        grid = np.linspace(1e-6, 1 - 1e-6, 200)
        for gamma2 in (0.6, 3.6, 1.0):
            model = Frechet(gamma2)
            assert np.allclose(model.cdf(model.quantile(grid)), grid, atol=1e-12)

    def test_monotone_to_zero(self):
        us = np.array([1e-12, 1e-8, 1e-4, 1e-2])
        xs = frechet_quantile(us, 0.6)
        assert np.all(np.diff(xs) > 0)
        assert xs[0] > 0.0
        with pytest.raises(DomainError):
            frechet_quantile(0.0, 0.6)


class TestPareto:
    def test_round_trip(self):
        grid = np.linspace(0.0, 0.999, 100)
        model = Pareto(1.0)
        assert np.allclose(model.cdf(model.quantile(grid)), grid, atol=1e-12)

    def test_support_starts_at_one(self):
        assert pareto_quantile(0.0, 2.0) == 1.0


class TestGamma2FromP:
    def test_arithmetic(self):
        assert gamma2_from_p(0.4, 0.6) == pytest.approx(0.6, abs=1e-15)
        assert gamma2_from_p(0.4, 0.9) == pytest.approx(3.6, abs=1e-12)

    def test_symmetric_point(self):
        assert gamma2_from_p(0.7, 0.5) == pytest.approx(0.7, abs=1e-15)

    def test_round_trip(self):
        for gamma1 in (0.4, 0.6, 2.0):
            for p in (0.55, 0.6, 0.75, 0.9, 0.99):
                gamma2 = gamma2_from_p(gamma1, p)
                assert upper_uncensored_proportion(gamma1, gamma2) == pytest.approx(
                    p, abs=1e-12
                )

    def test_rejects_degenerate_p(self):
        with pytest.raises(DomainError):
            gamma2_from_p(0.4, 1.0)
        with pytest.raises(DomainError):
            gamma2_from_p(0.4, 0.0)


class TestRngStream:
    def test_same_stream_is_identical(self):
        a = RngStream(42, 3).generator().random(16)
        b = RngStream(42, 3).generator().random(16)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = RngStream(42, 3).generator().random(16)
        b = RngStream(42, 4).generator().random(16)
        c = RngStream(43, 3).generator().random(16)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_validation(self):
        with pytest.raises(DomainError):
            RngStream(-1, 0)
        with pytest.raises(DomainError):
            RngStream(0, -2)


class TestSampleCensored:
    def test_complete_data_all_uncensored(self):
        spec = ModelSpec(loss=Burr(0.4, 0.25), censor=None)
        sample = sample_censored(spec, 50, RngStream(7, 1))
        assert np.all(sample.delta == 1)
        assert np.all(sample.z > 0)

    def test_deterministic_for_fixed_stream(self):
        spec = ModelSpec(loss=Burr(0.4, 0.25), censor=Frechet(3.6))
        a = sample_censored(spec, 100, RngStream(7, 2))
        b = sample_censored(spec, 100, RngStream(7, 2))
        assert np.array_equal(a.z, b.z)
        assert np.array_equal(a.delta, b.delta)

    def test_streams_do_not_interfere(self):
        spec = ModelSpec(loss=Burr(0.4, 0.25), censor=Frechet(3.6))
        alone = sample_censored(spec, 10, RngStream(7, 5))
        sample_censored(spec, 1000, RngStream(7, 4))
        after = sample_censored(spec, 10, RngStream(7, 5))
        assert np.array_equal(alone.z, after.z)

    def test_rejects_empty(self):
        spec = ModelSpec(loss=Pareto(1.0))
        with pytest.raises(DomainError):
            sample_censored(spec, 0, RngStream(1, 1))

    def test_top_censoring_rate_near_limit(self):
        # censored fraction among the top order statistics approaches 1 - p
        gamma1, p = 0.4, 0.9
        spec = ModelSpec(loss=Burr(gamma1, 0.25),
                         censor=Frechet(gamma2_from_p(gamma1, p)))
        n = 100_000
        k = int(n**0.7)
        sample = sort_with_concomitants(sample_censored(spec, n, RngStream(11, 1)))
        assert p_hat(sample, k) == pytest.approx(p, abs=0.03)

    def test_hill_recovers_burr_tail_index(self):
        # complete Burr samples: median Hill estimate within 0.05 of gamma1
        gamma1 = 0.4
        spec = ModelSpec(loss=Burr(gamma1, 0.25))
        n = 10_000
        k = int(n**0.55)
        estimates = []
        for seed in range(100):
            sample = sort_with_concomitants(sample_censored(spec, n, RngStream(1, seed)))
            estimates.append(hill(sample, k))
        assert abs(np.median(estimates) - gamma1) < 0.05

    def test_model_spec_p(self):
        spec = ModelSpec(loss=Burr(0.4, 0.25), censor=Frechet(3.6))
        assert spec.p == pytest.approx(0.9, abs=1e-12)
        assert ModelSpec(loss=Pareto(1.0)).p == 1.0

    def test_sample_feeds_estimators(self):
        spec = ModelSpec(loss=Burr(0.4, 0.25), censor=Frechet(3.6))
        sample = sort_with_concomitants(sample_censored(spec, 500, RngStream(3, 1)))
        value = hill(sample, 50)
        assert np.isfinite(value) and value > 0
