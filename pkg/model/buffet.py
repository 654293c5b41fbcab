"""
自助餐动力学 - 单步推进 M_{n+1} | F_n ∼ BeP(ν_n) 与整条轨迹模拟
"""

from typing import Optional, Tuple, TYPE_CHECKING

import numpy as np

from numerics.rng import RngStream
from numerics.sampling import bernoulli_sample, poisson_sample
from numerics.special import gamma_ratio, h_of
from utils.config import Config
from utils.errors import DomainError
from utils.logger import Logger
from .params import ModelParams, validate_params
from .state import BuffetState, CustomerOutcome, inclusion_probabilities, lambda_of

if TYPE_CHECKING:
    from stats.trajectory import RecordPlan, Trajectory

logger = Logger()


def new_state(params: ModelParams, seed: int, stream_id: int = 0,
              track_dishes: bool = True, capacity_limit: Optional[int] = None) -> BuffetState:
    """构造 n = 0 的状态"""
    if capacity_limit is None:
        capacity_limit = Config.from_env().dish_capacity()
    return BuffetState(params, RngStream(seed, stream_id), capacity_limit, track_dishes)


def _advance(state: BuffetState, params: ModelParams) -> Tuple[CustomerOutcome, np.ndarray]:
    """推进一位顾客，同时返回本步用到的纳入概率"""
    rng = state.rng
    probs = inclusion_probabilities(state, params)
    repeat_ids = np.flatnonzero(bernoulli_sample(probs, rng))
    n_new = poisson_sample(state.lambda_n, rng)
    labels = rng.random(n_new)
    # 权重在选择之后抽取
    weight = params.weights.draw(rng)
    k = len(repeat_ids) + n_new
    customer = state.n + 1

    # 先追加：容量不足时在任何修改之前报错
    state.dishes.append(labels, weight, customer)
    state.dishes.add_weight(repeat_ids, weight)
    _update_counters(state, params, labels, k, n_new, weight)
    outcome = CustomerOutcome(
        customer_index=customer,
        K=k,
        N=n_new,
        repeat_dish_ids=tuple(int(i) for i in repeat_ids),
        new_dish_labels=tuple(float(x) for x in labels),
        R=weight,
    )
    return outcome, probs


def _update_counters(state: BuffetState, params: ModelParams, labels: np.ndarray,
                     k: int, n_new: int, weight: float):
    state.W.add(weight)
    state.weighted_K_sum.add(weight * k)
    state.sum_R_sq.add(weight * weight)
    state.sum_K += k
    state.sum_K_sq += k * k
    state.L_n += n_new
    if state.subset is not None and n_new:
        state.L_B += int(np.count_nonzero(state.subset.contains(labels)))
    state.last_K = k
    state.last_N = n_new
    state.last_R = weight
    state.n += 1
    state.lambda_n = lambda_of(params, state.W_n)


def step(state: BuffetState, params: ModelParams) -> Tuple[BuffetState, CustomerOutcome]:
    """第 n+1 位顾客：旧菜逐一伯努利、新菜 Poi(Λ_n)、然后抽权重"""
    if state.dishes is None:
        raise DomainError("step 需要菜品表；仅计数模式请用 step_counts")
    outcome, _ = _advance(state, params)
    return state, outcome


def step_counts(state: BuffetState, params: ModelParams) -> int:
    """仅计数推进：N_{n+1} | F_n ∼ Poi(Λ_n)，不逐菜抽样，返回 N"""
    rng = state.rng
    n_new = poisson_sample(state.lambda_n, rng)
    labels = rng.random(n_new)
    weight = params.weights.draw(rng)
    state.W.add(weight)
    state.sum_R_sq.add(weight * weight)
    state.L_n += n_new
    if state.subset is not None and n_new:
        state.L_B += int(np.count_nonzero(state.subset.contains(labels)))
    state.last_N = n_new
    state.last_R = weight
    state.n += 1
    state.lambda_n = lambda_of(params, state.W_n)
    return n_new


def expected_L_path(params: ModelParams, n: int) -> np.ndarray:
    """常数权重下 E(L_k) = Σ_{j<k} Λ_j，k = 1..n"""
    if not params.weights.is_constant:
        raise DomainError("确定的 Λ 路径只在常数权重下存在")
    r = params.weights.mean
    lambdas = np.array([lambda_of(params, j * r) for j in range(n)])
    return np.cumsum(lambdas)


def h_grid_sup(beta: float, x_min: float, x_max: float = 1e8, points: int = 2000) -> float:
    """对数网格上 sup |h(x)|"""
    grid = np.geomspace(x_min, x_max, points)
    return max(abs(h_of(float(x), beta)) for x in grid)


def x_h_grid_sup(beta: float, x_min: float, x_max: float = 1e8, points: int = 2000) -> float:
    """对数网格上 sup |x·h(x)|"""
    grid = np.geomspace(x_min, x_max, points)
    return max(abs(float(x) * h_of(float(x), beta)) for x in grid)


def lambda_bound_constant(params: ModelParams) -> float:
    """Λ_n ≤ D/n^{1−β} 中的常数 D，v = min(u, c+u)"""
    beta, c = params.beta, params.c
    u = params.weights.lower_bound
    v = min(u, c + u)
    sup_h = h_grid_sup(beta, c + u)
    return params.alpha * gamma_ratio(c + beta, 1.0 - beta) * (1.0 + sup_h) / v ** (1.0 - beta)


def run_trajectory(params: ModelParams, n_max: int, seed: int, stream_id: int = 0,
                   record: Optional["RecordPlan"] = None,
                   capacity_limit: Optional[int] = None) -> "Trajectory":
    """模拟 n_max 位顾客并在检查点记录统计量"""
    # 延迟导入，避免循环依赖
    from stats.trajectory import RecordPlan, Trajectory, TrajectoryAudit, StatRow

    if n_max < 1:
        raise DomainError(f"n_max 必须 >= 1: {n_max}")
    validate_params(params)
    plan = record or RecordPlan()
    checkpoints = plan.checkpoints(n_max)
    state = new_state(params, seed, stream_id, track_dishes=not plan.counts_only,
                      capacity_limit=capacity_limit)
    audit = TrajectoryAudit.start(params, n_max) if plan.audit else None
    big_n = 1.0 / (1.0 - params.beta)

    rows = []
    next_index = 0
    for _ in range(n_max):
        if plan.counts_only:
            step_counts(state, params)
        else:
            _, probs = _advance(state, params)
            if audit is not None:
                audit.observe_probabilities(probs)
        if audit is not None:
            audit.observe_step(state, big_n)
        if next_index < len(checkpoints) and state.n == checkpoints[next_index]:
            rows.append(StatRow.from_state(state, params))
            next_index += 1

    logger.log_sim_event(stream_id, "completed",
                         f"n={state.n}, L={state.L_n}, seed={seed}")
    return Trajectory(
        params=params,
        seed=seed,
        stream_id=stream_id,
        rows=rows,
        counts_only=plan.counts_only,
        audit=audit,
        final_state=state if plan.keep_state else None,
    )
