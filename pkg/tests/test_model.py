"""模型模块测试：参数校验、Λ、纳入概率、单步推进与轨迹"""

import math

import numpy as np
import pytest

from model import (
    Dish,
    DishTable,
    IntervalSet,
    ModelParams,
    WeightKind,
    WeightSpec,
    expected_L_path,
    inclusion_probabilities,
    inclusion_probability,
    lambda_bound_constant,
    lambda_of,
    new_state,
    run_trajectory,
    step,
    step_counts,
    validate_params,
)
from montecarlo.goodness import chi_square_poisson
from numerics import RngStream
from stats import RecordPlan, conditional_second_moment, g_of, l_of_B, z_of
from utils.errors import (
    DomainError,
    InvalidParametersError,
    InvalidSubsetError,
    ResourceLimitError,
)

CAPACITY = 1_000_000
STANDARD = ModelParams(alpha=1.0, beta=0.5, c=1.0)
WEIGHTED = ModelParams(alpha=2.0, beta=0.25, c=1.0, weights=WeightSpec.two_point(1.0, 2.0, 0.5))


def _state_after(params, n, seed=17):
    plan = RecordPlan(geometric=False, keep_state=True)
    return run_trajectory(params, n, seed, 0, plan, capacity_limit=CAPACITY).final_state


class TestWeightSpec:

    def test_parse(self):
        assert WeightSpec.parse("const:1") == WeightSpec.constant(1.0)
        assert WeightSpec.parse("unif:1,2") == WeightSpec.uniform(1.0, 2.0)
        spec = WeightSpec.parse("twopoint:1,2,0.5")
        assert spec.kind is WeightKind.TWO_POINT
        assert (spec.mean, spec.second_moment) == (1.5, 2.5)
        assert WeightSpec.parse(spec.to_text()) == spec

    @pytest.mark.parametrize("text", ["bogus:1", "const:", "unif:2,1", "twopoint:1,2,1.0",
                                      "const:0", "unif:1"])
    def test_invalid(self, text):
        with pytest.raises(InvalidParametersError):
            WeightSpec.parse(text)

    def test_uniform_moments(self):
        spec = WeightSpec.uniform(1.0, 2.0)
        assert spec.mean == 1.5
        assert spec.second_moment == pytest.approx(7.0 / 3.0)
        assert (spec.lower_bound, spec.upper_bound) == (1.0, 2.0)

    def test_constant_draw_consumes_no_randomness(self):
        rng = RngStream(3, 0)
        assert WeightSpec.constant(2.5).draw(rng) == 2.5
        assert rng == RngStream(3, 0)

    def test_draws_inside_support(self):
        rng = RngStream(3, 0)
        spec = WeightSpec.two_point(1.0, 2.0, 0.3)
        draws = np.array([spec.draw(rng) for _ in range(10_000)])
        assert set(np.unique(draws)) == {1.0, 2.0}
        assert abs(np.mean(draws == 1.0) - 0.3) < 4 * math.sqrt(0.21 / draws.size)


class TestIntervalSet:

    def test_parse_and_measure(self):
        subset = IntervalSet.parse("0.5:0.75, 0:0.25")
        assert subset.intervals == ((0.0, 0.25), (0.5, 0.75))
        assert subset.measure == pytest.approx(0.5)
        np.testing.assert_array_equal(subset.contains(np.array([0.1, 0.3, 0.75])),
                                      [True, False, True])

    def test_empty(self):
        assert IntervalSet.parse("empty").measure == 0.0
        assert not IntervalSet(()).contains(np.array([0.5])).any()

    def test_touching_intervals_allowed(self):
        assert IntervalSet.parse("0:0.5,0.5:1").measure == 1.0

    @pytest.mark.parametrize("text", ["0:0.6,0.5:1", "0.2:0.1", "0:1.5", "a:b"])
    def test_invalid(self, text):
        with pytest.raises(InvalidSubsetError):
            IntervalSet.parse(text)


class TestValidateParams:

    def test_standard_ibp(self):
        flags = validate_params(STANDARD)
        assert flags.model_valid and flags.thm43_ok and flags.thm44_ok
        assert not flags.thm51_ok
        assert flags.thm51_standard_ok

    def test_two_point_all_flags(self):
        params = ModelParams(alpha=1.0, beta=0.25, c=1.0,
                             weights=WeightSpec.two_point(1.0, 2.0, 0.5))
        flags = validate_params(params)
        assert all([flags.model_valid, flags.thm43_ok, flags.thm44_ok,
                    flags.thm51_ok, flags.thm51_standard_ok])

    def test_negative_beta(self):
        flags = validate_params(ModelParams(alpha=1.0, beta=-1.0, c=2.0))
        assert flags.model_valid and not flags.thm43_ok

    def test_boundary_c(self):
        with pytest.raises(InvalidParametersError, match=r"c > -beta"):
            validate_params(ModelParams(alpha=1.0, beta=0.5, c=-0.5))

    @pytest.mark.parametrize("params, fragment", [
        (ModelParams(alpha=0.0, beta=0.5, c=1.0), "alpha > 0"),
        (ModelParams(alpha=1.0, beta=1.0, c=1.0), "beta < 1"),
        (ModelParams(alpha=1.0, beta=0.5, c=1.0, weights=WeightSpec.constant(0.5)),
         "u > max(beta, 0)"),
    ])
    def test_violations_are_named(self, params, fragment):
        with pytest.raises(InvalidParametersError) as info:
            validate_params(params)
        assert fragment in str(info.value)


class TestLambda:

    def test_initial(self):
        assert lambda_of(WEIGHTED, 0.0) == WEIGHTED.alpha

    def test_beta_zero(self):
        params = ModelParams(alpha=1.0, beta=0.0, c=1.0)
        for n in range(6):
            assert lambda_of(params, float(n)) == pytest.approx(1.0 / (1.0 + n), rel=1e-14)

    def test_half(self):
        params = ModelParams(alpha=1.0, beta=0.5, c=0.5)
        assert lambda_of(params, 1.0) == pytest.approx(2.0 / 3.0, rel=1e-14)

    def test_negative_weight_sum(self):
        with pytest.raises(DomainError):
            lambda_of(STANDARD, -1.0)

    def test_strictly_decreasing_and_bounded(self):
        params = WEIGHTED
        bound = lambda_bound_constant(params)
        ws = np.cumsum(np.full(2000, params.weights.lower_bound))
        lambdas = np.array([lambda_of(params, float(w)) for w in ws])
        assert np.all(np.diff(lambdas) < 0)
        n = np.arange(1, ws.size + 1)
        assert np.all(lambdas <= bound / n ** (1 - params.beta) * (1 + 1e-12))


class TestInclusionProbability:

    def _state_with_weight(self, params, w):
        state = new_state(params, 0, capacity_limit=CAPACITY)
        state.W.add(w)
        return state

    def test_beta_zero(self):
        params = ModelParams(alpha=1.0, beta=0.0, c=1.0)
        dish = Dish(0, 0.3, 1.0, 1)
        assert inclusion_probability(dish, self._state_with_weight(params, 1.0), params) == 0.5

    def test_half(self):
        params = ModelParams(alpha=1.0, beta=0.5, c=0.5)
        dish = Dish(0, 0.3, 1.0, 1)
        value = inclusion_probability(dish, self._state_with_weight(params, 1.0), params)
        assert value == pytest.approx(1.0 / 3.0)

    @pytest.mark.parametrize("params", [STANDARD, WEIGHTED,
                                        ModelParams(alpha=3.0, beta=-1.0, c=2.0)])
    def test_probabilities_in_open_unit_interval(self, params):
        for seed in range(20):
            state = new_state(params, seed, capacity_limit=CAPACITY)
            for _ in range(200):
                probs = inclusion_probabilities(state, params)
                if probs.size:
                    assert probs.min() > 0.0 and probs.max() < 1.0
                step(state, params)


class TestDishTable:

    def test_grows(self):
        table = DishTable(capacity_limit=1000, initial_capacity=2)
        table.append(np.linspace(0, 1, 10), 1.5, customer=1)
        table.add_weight(np.array([0, 3]), 2.0)
        assert len(table) == 10
        assert table.dish(3).weighted_count == 3.5
        assert table.dish(4).first_customer == 1

    def test_capacity_limit(self):
        table = DishTable(capacity_limit=4)
        with pytest.raises(ResourceLimitError):
            table.append(np.zeros(5), 1.0, customer=1)


class TestStep:

    def test_first_customer_only_new_dishes(self):
        state = new_state(WEIGHTED, 8, capacity_limit=CAPACITY)
        _, outcome = step(state, WEIGHTED)
        assert outcome.customer_index == 1
        assert outcome.repeat_dish_ids == ()
        assert outcome.K == outcome.N == state.L_n

    def test_first_customer_is_poisson_alpha(self):
        params = ModelParams(alpha=2.0, beta=0.5, c=1.0)
        ks = [step(new_state(params, 123, i, capacity_limit=CAPACITY), params)[1].K
              for i in range(20_000)]
        assert chi_square_poisson(ks, params.alpha).p_value > 0.001

    def test_deterministic(self):
        def outcomes():
            state = new_state(WEIGHTED, 42, 5, capacity_limit=CAPACITY)
            return [step(state, WEIGHTED)[1] for _ in range(100)]
        assert outcomes() == outcomes()

    def test_one_step_mean_and_variance(self):
        state = _state_after(WEIGHTED, 40)
        z = z_of(state, WEIGHTED)
        variance = conditional_second_moment(state, WEIGHTED) - z * z
        assert variance == pytest.approx(z - g_of(state, WEIGHTED))
        reps = 20_000
        ks = np.array([step(state.copy(RngStream(7, i)), WEIGHTED)[1].K for i in range(reps)])
        assert abs(ks.mean() - z) < 4 * math.sqrt(variance / reps)
        assert abs(np.mean(ks ** 2) - conditional_second_moment(state, WEIGHTED)) < \
            5 * np.std(ks ** 2) / math.sqrt(reps)

    def test_copy_leaves_original_untouched(self):
        state = _state_after(STANDARD, 20)
        before = state.get_info()
        step(state.copy(RngStream(1, 1)), STANDARD)
        assert state.get_info() == before

    def test_capacity_error_leaves_state_unchanged(self):
        params = ModelParams(alpha=3.0, beta=0.5, c=1.0)
        state = new_state(params, 21, capacity_limit=12)
        for _ in range(200):
            counts = state.dishes.weighted_counts.copy()
            n, total = state.n, state.W_n
            try:
                step(state, params)
            except ResourceLimitError:
                break
        else:
            pytest.fail("dish table never reached its capacity")
        np.testing.assert_array_equal(state.dishes.weighted_counts, counts)
        assert (state.n, state.W_n) == (n, total)

    def test_counts_stay_consistent(self):
        state = new_state(WEIGHTED, 13, capacity_limit=CAPACITY)
        previous_L = 0
        for _ in range(300):
            _, outcome = step(state, WEIGHTED)
            assert state.L_n >= previous_L
            assert outcome.K <= state.L_n
            assert np.all(state.dishes.weighted_counts <= state.W_n + 1e-9)
            previous_L = state.L_n

    def test_counts_only(self):
        state = new_state(STANDARD, 1, track_dishes=False, capacity_limit=CAPACITY)
        with pytest.raises(DomainError):
            step(state, STANDARD)
        total = sum(step_counts(state, STANDARD) for _ in range(50))
        assert total == state.L_n and state.n == 50


class TestTrajectory:

    def test_single_step(self):
        trajectory = run_trajectory(WEIGHTED, 1, 9, capacity_limit=CAPACITY)
        row = trajectory.final
        assert row.n == 1
        assert row.L == row.K == row.N

    def test_subset_counts(self):
        params = STANDARD.replace(subset=IntervalSet.parse("0:0.5"))
        plan = RecordPlan(keep_state=True)
        full = run_trajectory(params, 300, 4, record=plan, capacity_limit=CAPACITY)
        assert full.final.L_B == l_of_B(full.final_state, params.subset)
        counts = run_trajectory(params, 300, 4, record=RecordPlan(counts_only=True),
                                capacity_limit=CAPACITY)
        assert 0 <= counts.final.L_B <= counts.final.L
        assert counts.final.K is None and counts.final.Kbar is None

    def test_n_max_must_be_positive(self):
        with pytest.raises(DomainError):
            run_trajectory(STANDARD, 0, 1, capacity_limit=CAPACITY)

    def test_expected_path_beta_zero(self):
        params = ModelParams(alpha=1.0, beta=0.0, c=1.0)
        path = expected_L_path(params, 10)
        harmonic = np.cumsum(1.0 / np.arange(1, 11))
        np.testing.assert_allclose(path, harmonic, rtol=1e-13)

    def test_expected_path_requires_constant_weights(self):
        with pytest.raises(DomainError):
            expected_L_path(WEIGHTED, 10)

    def test_slln_scale(self):
        # L_n/n^β 在 n = 10⁴ 时接近 λ(β) = 2 Γ(2)/Γ(1.5)
        limit = 2.0 / math.gamma(1.5)
        ratios = [run_trajectory(STANDARD, 10_000, 3, i, RecordPlan(counts_only=True),
                                 capacity_limit=CAPACITY).final.L / 100.0 for i in range(10)]
        assert abs(np.mean(ratios) - limit) < 0.1 * limit

    def test_large_new_dish_counts_stop_early(self):
        # β = 1/2: N_i > 2 只在前若干位顾客出现
        plan = RecordPlan(geometric=False, counts_only=True, audit=True)
        last = np.array([run_trajectory(STANDARD, 1000, 4, i, plan, capacity_limit=CAPACITY)
                         .audit.last_big_N_index for i in range(60)])
        assert np.median(last) <= 50
        assert np.mean(last > 500) <= 0.15
