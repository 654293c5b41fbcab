"""估计量测试：a_n、λ(β)、β̂_n、σ̂²、τ̂² 与置信区间"""

import math

import numpy as np
import pytest

from estimators import (
    a_n,
    beta_hat,
    confidence_interval,
    estimate_from_row,
    lambda_limit,
    sigma_hat_sq,
    tau_hat_sq,
)
from model import ModelParams, WeightSpec, run_trajectory
from stats import RecordPlan
from utils.errors import DomainError


def _moments(ks, rs):
    ks = np.asarray(ks, dtype=float)
    rs = np.asarray(rs, dtype=float)
    return (float(np.sum(rs ** 2)), float(rs.mean())), (float(np.sum(ks ** 2)), float(ks.mean()))


class TestNormalisation:

    @pytest.mark.parametrize("beta, n, expected", [
        (0.0, 100, math.log(100)),
        (0.5, 10_000, 100.0),
        (0.25, 16, 2.0),
    ])
    def test_a_n(self, beta, n, expected):
        assert a_n(beta, n) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("beta", [-0.5, 1.0])
    def test_a_n_domain(self, beta):
        with pytest.raises(DomainError):
            a_n(beta, 100)

    @pytest.mark.parametrize("params, expected", [
        (ModelParams(alpha=1.0, beta=0.0, c=1.0), 1.0),
        (ModelParams(alpha=1.0, beta=0.5, c=0.5), math.sqrt(math.pi)),
        (ModelParams(alpha=2.0, beta=0.5, c=1.0, weights=WeightSpec.constant(4.0)),
         2.0 / math.gamma(1.5)),
        (ModelParams(alpha=3.0, beta=0.0, c=2.0, weights=WeightSpec.uniform(1.0, 3.0)), 3.0),
    ])
    def test_lambda_limit(self, params, expected):
        assert lambda_limit(params) == pytest.approx(expected, rel=1e-12)

    def test_lambda_limit_domain(self):
        with pytest.raises(DomainError):
            lambda_limit(ModelParams(alpha=1.0, beta=-1.0, c=2.0))


class TestBetaHat:

    def test_values(self):
        assert beta_hat(100, 10_000) == pytest.approx(0.5)
        assert beta_hat(1, 37) == 0.0

    def test_undefined_without_dishes(self):
        assert beta_hat(0, 1000) is None

    def test_domain(self):
        with pytest.raises(DomainError):
            beta_hat(5, 1)


class TestVarianceEstimates:

    def test_unit_weights_give_empirical_variance(self):
        ks = [0, 3, 1, 4, 2, 2, 5]
        weights, k_moments = _moments(ks, np.ones(len(ks)))
        assert sigma_hat_sq(weights, k_moments, len(ks)) == pytest.approx(np.var(ks))
        assert tau_hat_sq(weights, k_moments, len(ks)) == 0.0

    def test_constant_counts_give_zero(self):
        ks = [3] * 10
        rs = [1.0, 2.0] * 5
        weights, k_moments = _moments(ks, rs)
        assert sigma_hat_sq(weights, k_moments, 10) == 0.0
        assert tau_hat_sq(weights, k_moments, 10) == 0.0

    def test_constant_non_unit_weights(self):
        ks = [0, 2, 5, 1]
        weights, k_moments = _moments(ks, [0.7] * 4)
        assert tau_hat_sq(weights, k_moments, 4) == 0.0
        assert sigma_hat_sq(weights, k_moments, 4) == pytest.approx(np.var(ks))

    def test_two_point_factors(self):
        ks = [1, 4, 2, 0, 3, 6, 2, 1]
        rs = [1.0, 2.0] * 4
        weights, k_moments = _moments(ks, rs)
        var_k = np.var(ks)
        assert tau_hat_sq(weights, k_moments, 8) == pytest.approx(var_k / 9.0)
        assert sigma_hat_sq(weights, k_moments, 8) == pytest.approx(11.0 * var_k / 9.0)

    def test_sigma_dominates_tau(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            ks = rng.poisson(3.0, size=40)
            rs = rng.uniform(1.0, 2.0, size=40)
            weights, k_moments = _moments(ks, rs)
            s2 = sigma_hat_sq(weights, k_moments, 40)
            t2 = tau_hat_sq(weights, k_moments, 40)
            assert s2 >= t2 >= 0.0
            # 两者第一因子相差 (1/n)ΣR²/R̄²
            first = weights[0] / 40 / weights[1] ** 2
            assert s2 - t2 == pytest.approx(first * (k_moments[0] / 40 - k_moments[1] ** 2))


class TestConfidenceInterval:

    def test_degenerate(self):
        assert confidence_interval(2.5, 0.0, 10) == (2.5, 2.5)

    def test_half_width(self):
        lo, hi = confidence_interval(1.0, 1.0, 100, 0.95)
        assert hi - 1.0 == pytest.approx(0.1959964, abs=1e-7)
        assert 1.0 - lo == pytest.approx(hi - 1.0)

    def test_width_scales(self):
        narrow = np.subtract(*reversed(confidence_interval(0.0, 2.0, 400)))
        wide = np.subtract(*reversed(confidence_interval(0.0, 2.0, 100)))
        assert wide == pytest.approx(2.0 * narrow)

    @pytest.mark.parametrize("level", [0.0, 1.0, 1.2])
    def test_level_domain(self, level):
        with pytest.raises(DomainError):
            confidence_interval(0.0, 1.0, 10, level)


class TestEstimateFromRow:

    def test_report(self):
        params = ModelParams(alpha=2.0, beta=0.25, c=1.0,
                             weights=WeightSpec.two_point(1.0, 2.0, 0.5))
        row = run_trajectory(params, 2000, 4, capacity_limit=10 ** 6).final
        report = estimate_from_row(row, params, 0.9)
        assert report.n == 2000 and report.L_n == row.L
        assert report.lambda_hat == pytest.approx(row.L / 2000 ** 0.25)
        assert report.ci_lo <= report.kbar <= report.ci_hi
        assert report.sigma_hat_sq >= report.tau_hat_sq > 0.0
        assert report.to_dict()["ci_level"] == 0.9

    def test_requires_full_mode(self):
        params = ModelParams(alpha=1.0, beta=0.5, c=1.0)
        row = run_trajectory(params, 50, 4, record=RecordPlan(counts_only=True),
                             capacity_limit=10 ** 6).final
        with pytest.raises(DomainError):
            estimate_from_row(row, params)
