"""蒙特卡洛模块测试：重复实验引擎、拟合优度检验与验证套件"""

import json
import math

import numpy as np
import pytest
from scipy import stats

from estimators import a_n, lambda_limit
from model import ModelParams, WeightSpec, expected_L_path, run_trajectory
from montecarlo import (
    CATALOGUE,
    SuiteReport,
    Verdict,
    chi_square_poisson,
    ks_test,
    log_gamma_recurrence_residual,
    normal_cdf_with_variance,
    run_case,
    run_replicates,
    suite_beta_hat,
    suite_cid_identity,
    suite_clt_Ln,
    suite_clt_Kbar,
    suite_finite_buffet,
    suite_invariants,
    suite_poisson_oracle,
    suite_slln_Ln,
)
from numerics import RngStream, normal_cdf, normal_quantile, normal_sample
from stats import RecordPlan
from utils.errors import DomainError, InapplicableSuiteError

STANDARD = ModelParams(alpha=1.0, beta=0.5, c=1.0)
WEIGHTED = ModelParams(alpha=1.0, beta=0.25, c=1.0, weights=WeightSpec.two_point(1.0, 2.0, 0.5))


class TestKolmogorovSmirnov:

    def test_singleton_at_median(self):
        d, _ = ks_test([0.0], normal_cdf)
        assert d == pytest.approx(0.5)

    def test_exact_quantiles(self):
        m = 200
        samples = [normal_quantile((i - 0.5) / m) for i in range(1, m + 1)]
        d, p = ks_test(samples, normal_cdf)
        assert d == pytest.approx(0.5 / m, abs=1e-12)
        assert p == pytest.approx(1.0)

    def test_normal_sampler(self):
        _, p = ks_test(normal_sample(RngStream(12, 0), 10_000), normal_cdf)
        assert p > 0.001

    def test_detects_wrong_variance(self):
        samples = normal_sample(RngStream(12, 1), 5000) * 2.0
        _, p = ks_test(samples, normal_cdf_with_variance(1.0))
        assert p < 1e-6

    def test_matches_scipy(self):
        samples = normal_sample(RngStream(4, 0), 500)
        d, _ = ks_test(samples, normal_cdf)
        assert d == pytest.approx(stats.kstest(samples, "norm").statistic, abs=1e-12)

    def test_empty(self):
        with pytest.raises(DomainError):
            ks_test([], normal_cdf)


class TestChiSquarePoisson:

    def test_pooling(self):
        rng = np.random.default_rng(3)
        values = rng.poisson(4.0, size=2000)
        result = chi_square_poisson(values, 4.0)
        assert sum(result.observed) == 2000
        assert sum(result.expected) == pytest.approx(2000.0)
        assert min(result.expected) >= 5.0
        assert result.bins[-1][1] == -1
        assert result.dof == len(result.bins) - 1
        assert result.p_value > 0.001

    def test_rejects_wrong_mean(self):
        values = np.random.default_rng(3).poisson(6.0, size=2000)
        assert chi_square_poisson(values, 4.0).p_value < 1e-6

    def test_too_few_bins(self):
        result = chi_square_poisson([0, 1], 0.5)
        assert result.dof == 0
        assert math.isnan(result.p_value)


class TestReplicates:

    def test_independent_of_parallelism(self):
        serial = run_replicates(WEIGHTED, 150, 4, base_seed=9, parallelism=1)
        parallel = run_replicates(WEIGHTED, 150, 4, base_seed=9, parallelism=4)
        assert serial == parallel
        assert [s.stream_id for s in serial] == [0, 1, 2, 3]

    def test_single_replicate_matches_trajectory(self):
        (sample,) = run_replicates(WEIGHTED, 150, 1, base_seed=9)
        row = run_trajectory(WEIGHTED, 150, 9, 0).final
        assert sample.L_n == row.L
        assert sample.kbar == row.Kbar
        assert sample.z_n == row.Z

    def test_mean_matches_poisson_oracle(self):
        n, reps = 300, 400
        samples = run_replicates(STANDARD, n, reps, base_seed=1, counts_only=True)
        mean = np.mean([s.L_n for s in samples])
        expected = expected_L_path(STANDARD, n)[-1]
        assert abs(mean - expected) < 4 * math.sqrt(expected / reps)

    def test_coverage_fields(self):
        samples = run_replicates(WEIGHTED, 60, 3, base_seed=2, proxy_factor=3)
        for s in samples:
            assert s.covered == (s.ci_lo <= s.z_proxy <= s.ci_hi)

    def test_reps_must_be_positive(self):
        with pytest.raises(DomainError):
            run_replicates(WEIGHTED, 10, 0, base_seed=0)


class TestSuites:

    def test_poisson_oracle(self):
        report = suite_poisson_oracle(STANDARD, 100, 400, base_seed=5)
        assert report.statistics["oracle_mean"] == pytest.approx(expected_L_path(STANDARD, 100)[-1])
        assert report.statistics["p_value"] > 0.001
        assert report.verdict is Verdict.PASS

    def test_poisson_oracle_underpowered(self):
        report = suite_poisson_oracle(STANDARD, 50, 20, base_seed=5)
        assert report.verdict is Verdict.UNDERPOWERED

    def test_poisson_oracle_requires_constant_weights(self):
        with pytest.raises(InapplicableSuiteError):
            suite_poisson_oracle(WEIGHTED, 50, 200)

    @pytest.mark.parametrize("params", [
        ModelParams(alpha=1.0, beta=0.0, c=1.0, weights=WeightSpec.uniform(1.0, 2.0)),
        STANDARD,
        ModelParams(alpha=3.0, beta=0.8, c=0.5),
    ])
    def test_cid_identity_exact_cases(self, params):
        report = suite_cid_identity(params, 1000, base_seed=3)
        assert report.statistics["max_relative_residual"] <= 1e-10
        assert report.verdict is Verdict.PASS

    def test_cid_identity_general_weights(self):
        with pytest.raises(InapplicableSuiteError):
            suite_cid_identity(WEIGHTED, 100)
        report = suite_cid_identity(WEIGHTED, 100, report_only=True)
        assert report.verdict is Verdict.REPORT_ONLY
        assert report.statistics["max_relative_residual"] > 1e-10

    def test_finite_buffet(self):
        params = ModelParams(alpha=1.0, beta=-1.0, c=2.0)
        report = suite_finite_buffet(params, 2000, 100, base_seed=0)
        assert report.statistics["fraction_stable"] >= 0.95
        assert report.statistics["mean_L_late"] <= 10.0

    def test_finite_buffet_requires_negative_beta(self):
        with pytest.raises(InapplicableSuiteError):
            suite_finite_buffet(STANDARD, 100, 10)

    def test_slln_inapplicable_for_negative_beta(self):
        with pytest.raises(InapplicableSuiteError):
            suite_slln_Ln(ModelParams(alpha=1.0, beta=-1.0, c=2.0), (10, 100), 10)
        with pytest.raises(InapplicableSuiteError):
            suite_beta_hat(ModelParams(alpha=1.0, beta=-1.0, c=2.0), (10, 100), 10)

    def test_slln_ln_converges_on_small_grid(self):
        params = ModelParams(alpha=1.0, beta=0.5, c=5.0)
        report = suite_slln_Ln(params, (20, 200, 2000), 50, base_seed=6)
        statistics = report.statistics["L"]
        assert statistics["limit"] == pytest.approx(lambda_limit(params))
        assert statistics["decreasing"]
        assert statistics["final_within_tolerance"]
        assert report.verdict is Verdict.PASS

    def test_beta_hat_converges_on_small_grid(self):
        report = suite_beta_hat(STANDARD, (100, 1000), 60, base_seed=6)
        assert report.statistics["decreasing"]
        assert report.statistics["final_within_tolerance"]
        assert report.verdict is Verdict.PASS

    def test_clt_ln_scaled_moments(self):
        n, reps = 1000, 150
        report = suite_clt_Ln(STANDARD, n, reps, base_seed=8)
        lam = lambda_limit(STANDARD)
        a = a_n(STANDARD.beta, n)
        centre = (expected_L_path(STANDARD, n)[-1] - lam * a) / math.sqrt(a)
        scaled = report.statistics["ln_scaled"]
        assert scaled["target_variance"] == pytest.approx(lam)
        assert abs(scaled["mean"] - centre) < 4 * math.sqrt(lam / reps)
        assert 0.5 < scaled["variance"] / lam < 1.5
        assert "lnB_scaled" not in report.statistics

    def test_clt_ln_inapplicable_for_negative_beta(self):
        with pytest.raises(InapplicableSuiteError):
            suite_clt_Ln(ModelParams(alpha=1.0, beta=-1.0, c=2.0), 100, 10)

    def test_kbar_degenerate_needs_two_horizons(self):
        with pytest.raises(InapplicableSuiteError):
            suite_clt_Kbar(STANDARD, 10, 10)

    def test_kbar_unit_weights_limit_branch(self):
        params = ModelParams(alpha=1.0, beta=0.25, c=1.0)
        report = suite_clt_Kbar(params, 200, 20, base_seed=3, proxy_factor=3, branches=("limit",))
        assert "degenerate" not in report.statistics
        limit = report.statistics["limit"]
        assert 0.0 <= limit["coverage"] <= 1.0
        assert limit["proxy_factor"] == 3
        assert 0.0 <= limit["ks_D"] <= 1.0

    def test_kbar_unit_weights_runs_both_branches(self):
        report = suite_clt_Kbar(STANDARD, 40, 10, base_seed=3, proxy_factor=2)
        assert set(report.statistics) == {"degenerate", "limit"}

    def test_kbar_unit_weights_predictive_is_degenerate(self):
        report = suite_clt_Kbar(STANDARD, 40, 10, base_seed=3, proxy_factor=None,
                                branches=("predictive",))
        assert set(report.statistics) == {"degenerate"}
        assert report.n == [4, 40]

    def test_kbar_exploratory(self):
        params = ModelParams(alpha=1.0, beta=0.6, c=1.0, weights=WeightSpec.uniform(1.0, 2.0))
        report = suite_clt_Kbar(params, 30, 5, base_seed=1, proxy_factor=2)
        assert report.verdict is Verdict.REPORT_ONLY
        assert "exploration" in report.statistics

    def test_kbar_predictive_underpowered(self):
        report = suite_clt_Kbar(WEIGHTED, 50, 10, base_seed=1, proxy_factor=None,
                                branches=("predictive",))
        assert report.verdict is Verdict.UNDERPOWERED

    def test_invariants(self):
        report = suite_invariants(WEIGHTED, 200, 5, base_seed=2)
        statistics = report.statistics
        assert statistics["lambda_strictly_decreasing"]
        assert statistics["max_lambda_over_bound"] <= 1.0
        assert 0.0 < statistics["inclusion_probability_min"] < statistics["inclusion_probability_max"] < 1.0
        assert report.verdict is Verdict.PASS

    def test_log_gamma_recurrence(self):
        assert log_gamma_recurrence_residual() <= 1e-11


class TestReport:

    def test_json_serialisable(self):
        report = SuiteReport("demo", STANDARD.to_dict(), 10, 3,
                             {"value": np.float64(1.5), "flag": np.bool_(True),
                              "missing": math.nan, "series": np.arange(3)},
                             {}, Verdict.FAIL, base_seed=7)
        document = json.loads(report.to_json())
        assert document["statistics"] == {"value": 1.5, "flag": True, "missing": None,
                                          "series": [0, 1, 2]}
        assert document["seeds"] == {"base_seed": 7, "stream_ids": "0..2"}
        assert document["verdict"] == "fail"
        assert not report.passed

    def test_deterministic_for_fixed_seed(self):
        a = suite_cid_identity(STANDARD, 200, base_seed=4)
        b = suite_cid_identity(STANDARD, 200, base_seed=4)
        assert a.to_json() == b.to_json()


class TestAcceptance:

    def test_catalogue_is_complete(self):
        suites = {case.suite for case in CATALOGUE.values()}
        assert suites == {"poisson_oracle", "slln_Ln", "clt_Ln", "clt_Kbar", "cid_identity",
                          "finite_buffet", "beta_hat", "invariants"}

    def test_run_case_overrides(self):
        report = run_case(CATALOGUE["cid_beta0"], base_seed=1, n=50)
        assert report.case == "cid_beta0"
        assert report.n == 50
        assert report.verdict is Verdict.PASS

    def test_ci_coverage_with_unit_weights(self):
        report = run_case(CATALOGUE["ci_coverage"], base_seed=1,
                          params=ModelParams(alpha=1.0, beta=0.25, c=1.0),
                          n=100, reps=10, proxy_factor=3)
        assert report.case == "ci_coverage"
        assert "degenerate" not in report.statistics
        assert "coverage" in report.statistics["limit"]

    @pytest.mark.slow
    @pytest.mark.parametrize("name", sorted(CATALOGUE))
    def test_desk_scale(self, name):
        report = run_case(CATALOGUE[name], base_seed=20240101, parallelism=4)
        assert report.verdict in (Verdict.PASS, Verdict.REPORT_ONLY), report.summary_text()
