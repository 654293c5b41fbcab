"""
重复实验引擎 - 按 stream_id 排序、与并行度无关的并行轨迹模拟
"""

import math
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, fields
from typing import Callable, List, Optional, Sequence, TypeVar

from estimators.estimates import (
    a_n,
    confidence_interval,
    lambda_limit,
    sigma_hat_sq,
    tau_hat_sq,
)
from model.buffet import run_trajectory
from model.params import ModelParams, validate_params
from stats.trajectory import RecordPlan, Trajectory
from utils.errors import DomainError, ResourceLimitError
from utils.logger import Logger

T = TypeVar("T")
R = TypeVar("R")

logger = Logger()


@dataclass(frozen=True)
class ReplicateSample:
    """一次重复实验在终点 n 的缩放统计量；不适用的字段为 None"""

    stream_id: int
    n: int
    L_n: int
    L_B: Optional[int] = None
    ln_scaled: Optional[float] = None
    lnB_scaled: Optional[float] = None
    kbar: Optional[float] = None
    z_n: Optional[float] = None
    vn_scaled: Optional[float] = None
    tau_hat: Optional[float] = None
    vn_studentized: Optional[float] = None
    sigma_hat: Optional[float] = None
    z_proxy: Optional[float] = None
    limit_studentized: Optional[float] = None
    ci_lo: Optional[float] = None
    ci_hi: Optional[float] = None
    covered: Optional[bool] = None

    def __post_init__(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, float) and not math.isfinite(value):
                raise DomainError(
                    f"重复实验 {self.stream_id} 的统计量 {item.name} 非有限: {value}")


@dataclass(frozen=True)
class _ReplicateTask:
    params: ModelParams
    n: int
    base_seed: int
    stream_id: int
    proxy_n: Optional[int]
    level: float
    counts_only: bool


@dataclass(frozen=True)
class _TrajectoryTask:
    params: ModelParams
    n_max: int
    plan: RecordPlan
    base_seed: int
    stream_id: int


def parallel_map(fn: Callable[[T], R], tasks: Sequence[T], parallelism: int = 1) -> List[R]:
    """按输入顺序返回结果；parallelism 只影响速度"""
    if parallelism <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    workers = min(parallelism, len(tasks))
    chunksize = max(1, len(tasks) // (4 * workers))
    try:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(fn, tasks, chunksize=chunksize))
    except (BrokenProcessPool, MemoryError) as e:
        raise ResourceLimitError(f"并行工作进程失败: {e}")


def _scaled(count: int, n: int, beta: float, limit: float) -> Optional[float]:
    """√a_n(β){count/a_n(β) − limit}"""
    if not 0.0 <= beta < 1.0 or n < 2:
        return None
    a = a_n(beta, n)
    return math.sqrt(a) * (count / a - limit)


def _replicate_worker(task: _ReplicateTask) -> ReplicateSample:
    params, n = task.params, task.n
    horizon = task.proxy_n if task.proxy_n is not None else n
    plan = RecordPlan(extra=(n,), geometric=False, counts_only=task.counts_only)
    trajectory = run_trajectory(params, horizon, task.base_seed, task.stream_id, plan)
    row = trajectory.row_at(n)

    lam = lambda_limit(params) if 0.0 <= params.beta < 1.0 else None
    values = dict(stream_id=task.stream_id, n=n, L_n=row.L, L_B=row.L_B)
    if lam is not None:
        values["ln_scaled"] = _scaled(row.L, n, params.beta, lam)
        if row.L_B is not None:
            values["lnB_scaled"] = _scaled(row.L_B, n, params.beta, params.subset.measure * lam)
    if task.counts_only:
        return ReplicateSample(**values)

    weight_moments = (row.sum_R_sq, row.R_bar)
    k_moments = (float(row.sum_K_sq), row.Kbar)
    tau_hat = math.sqrt(tau_hat_sq(weight_moments, k_moments, n))
    sigma_hat = math.sqrt(sigma_hat_sq(weight_moments, k_moments, n))
    vn_scaled = math.sqrt(n) * row.V
    values.update(
        kbar=row.Kbar,
        z_n=row.Z,
        vn_scaled=vn_scaled,
        tau_hat=tau_hat,
        vn_studentized=vn_scaled / tau_hat if tau_hat > 0 else None,
        sigma_hat=sigma_hat,
    )
    if task.proxy_n is not None:
        z_proxy = trajectory.final.Kbar
        lo, hi = confidence_interval(row.Kbar, sigma_hat, n, task.level)
        values.update(
            z_proxy=z_proxy,
            limit_studentized=(math.sqrt(n) * (row.Kbar - z_proxy) / sigma_hat
                               if sigma_hat > 0 else None),
            ci_lo=lo,
            ci_hi=hi,
            covered=lo <= z_proxy <= hi,
        )
    return ReplicateSample(**values)


def run_replicates(params: ModelParams, n: int, reps: int, base_seed: int,
                   parallelism: int = 1, proxy_factor: Optional[int] = None,
                   level: float = 0.95, counts_only: bool = False) -> List[ReplicateSample]:
    """reps 条独立轨迹，第 i 条使用 stream_id = i

    proxy_factor 给定时每条轨迹延长到 N = proxy_factor·n，z_proxy = K̄_N。
    """
    if reps < 1:
        raise DomainError(f"reps 必须 >= 1: {reps}")
    if proxy_factor is not None and (counts_only or proxy_factor < 2):
        raise DomainError("z_proxy 需要完整模式且 proxy_factor >= 2")
    validate_params(params)
    proxy_n = proxy_factor * n if proxy_factor is not None else None
    tasks = [
        _ReplicateTask(params, n, base_seed, i, proxy_n, level, counts_only)
        for i in range(reps)
    ]
    logger.info(f"运行 {reps} 次重复实验: n={n}, proxy_n={proxy_n}, "
                f"counts_only={counts_only}, parallelism={parallelism}")
    return parallel_map(_replicate_worker, tasks, parallelism)


def _trajectory_worker(task: _TrajectoryTask) -> Trajectory:
    return run_trajectory(task.params, task.n_max, task.base_seed, task.stream_id, task.plan)


def replicate_trajectories(params: ModelParams, n_max: int, plan: RecordPlan, reps: int,
                           base_seed: int, parallelism: int = 1) -> List[Trajectory]:
    """多检查点版本：返回 reps 条按 stream_id 排序的轨迹"""
    if reps < 1:
        raise DomainError(f"reps 必须 >= 1: {reps}")
    validate_params(params)
    tasks = [_TrajectoryTask(params, n_max, plan, base_seed, i) for i in range(reps)]
    logger.info(f"运行 {reps} 条轨迹: n_max={n_max}, parallelism={parallelism}")
    return parallel_map(_trajectory_worker, tasks, parallelism)
