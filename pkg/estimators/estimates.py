"""
估计量 - a_n(β)、λ(β)、β̂_n、σ̂_n²、τ̂_n² 与 Z 的渐近置信区间
"""

import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional, Tuple

from model.params import ModelParams
from numerics.special import gamma_ratio, normal_quantile
from utils.errors import DomainError

# 一阶因子与 0 的差在此相对精度内视为 0（常数权重）
_CONSTANT_WEIGHT_RTOL = 1e-12


def _require_beta_range(beta: float):
    if not 0.0 <= beta < 1.0:
        raise DomainError(f"要求 beta ∈ [0,1): {beta}")


def a_n(beta: float, n: int) -> float:
    """规范化序列：β = 0 时 log n，β ∈ (0,1) 时 n^β"""
    _require_beta_range(beta)
    if n < 2:
        raise DomainError(f"a_n 要求 n >= 2: {n}")
    if beta == 0.0:
        return math.log(n)
    return float(n) ** beta


def lambda_limit(params: ModelParams) -> float:
    """λ(β)：β = 0 时 αc/r，否则 αΓ(c+1)/Γ(c+β) · 1/(β r^{1−β})"""
    beta = params.beta
    _require_beta_range(beta)
    r = params.weights.mean
    if beta == 0.0:
        return params.alpha * params.c / r
    return params.alpha * gamma_ratio(params.c + beta, 1.0 - beta) / (beta * r ** (1.0 - beta))


def beta_hat(L_n: int, n: int) -> Optional[float]:
    """β̂_n = log L_n / log n；L_n = 0 时无定义，返回 None"""
    if n < 2:
        raise DomainError(f"beta_hat 要求 n >= 2: {n}")
    if L_n < 0:
        raise DomainError(f"L_n 不能为负: {L_n}")
    if L_n == 0:
        return None
    return math.log(L_n) / math.log(n)


def _empirical_variance(sum_K_sq: float, kbar: float, n: int) -> float:
    return max(0.0, sum_K_sq / n - kbar * kbar)


def _weight_factor(sum_R_sq: float, R_bar: float, n: int, multiplier: float) -> float:
    ratio = (multiplier * sum_R_sq / n) / (R_bar * R_bar)
    factor = ratio - 1.0
    if abs(factor) <= _CONSTANT_WEIGHT_RTOL * ratio:
        return 0.0
    return max(0.0, factor)


def sigma_hat_sq(weight_moments: Tuple[float, float], K_moments: Tuple[float, float],
                 n: int) -> float:
    """σ̂_n² = {(2/n)ΣR_i²/R̄_n² − 1}{(1/n)ΣK_i² − K̄_n²}

    weight_moments = (ΣR_i², R̄_n)，K_moments = (ΣK_i², K̄_n)
    """
    if n < 1:
        raise DomainError(f"n 必须 >= 1: {n}")
    sum_R_sq, R_bar = weight_moments
    sum_K_sq, kbar = K_moments
    return _weight_factor(sum_R_sq, R_bar, n, 2.0) * _empirical_variance(sum_K_sq, kbar, n)


def tau_hat_sq(weight_moments: Tuple[float, float], K_moments: Tuple[float, float],
               n: int) -> float:
    """τ̂_n² = {(1/n)ΣR_i²/R̄_n² − 1}{(1/n)ΣK_i² − K̄_n²}，常数权重时恒为 0"""
    if n < 1:
        raise DomainError(f"n 必须 >= 1: {n}")
    sum_R_sq, R_bar = weight_moments
    sum_K_sq, kbar = K_moments
    return _weight_factor(sum_R_sq, R_bar, n, 1.0) * _empirical_variance(sum_K_sq, kbar, n)


def confidence_interval(kbar: float, sigma_hat: float, n: int,
                        level: float = 0.95) -> Tuple[float, float]:
    """K̄_n ± (u_a/√n) σ̂_n，u_a = Φ⁻¹(1 − (1−level)/2)"""
    if not 0.0 < level < 1.0:
        raise DomainError(f"置信水平必须在 (0,1) 内: {level}")
    if sigma_hat < 0 or n < 1:
        raise DomainError(f"要求 sigma_hat >= 0 且 n >= 1: {sigma_hat}, {n}")
    half_width = normal_quantile(1.0 - (1.0 - level) / 2.0) * sigma_hat / math.sqrt(n)
    return kbar - half_width, kbar + half_width


@dataclass(frozen=True)
class EstimateReport:
    """某一检查点上的推断量；lambda_hat = L_n/a_n(β) 使用已知 β"""

    n: int
    L_n: int
    kbar: float
    beta_hat: Optional[float]
    lambda_hat: Optional[float]
    sigma_hat_sq: float
    tau_hat_sq: float
    ci_level: float
    ci_lo: float
    ci_hi: float
    tau_hat_note: str = "plug-in analogue of sigma_hat_sq with q in place of 2q"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def estimate_from_row(row, params: ModelParams, level: float = 0.95) -> EstimateReport:
    """由一个完整模式的 StatRow 计算估计报告"""
    if row.Kbar is None:
        raise DomainError("估计 K̄ 相关量需要完整模式轨迹")
    n = row.n
    weight_moments = (row.sum_R_sq, row.R_bar)
    k_moments = (float(row.sum_K_sq), row.Kbar)
    s2 = sigma_hat_sq(weight_moments, k_moments, n)
    t2 = tau_hat_sq(weight_moments, k_moments, n)
    lo, hi = confidence_interval(row.Kbar, math.sqrt(s2), n, level)
    lam_hat = None
    if 0.0 <= params.beta < 1.0 and n >= 2:
        lam_hat = row.L / a_n(params.beta, n)
    return EstimateReport(
        n=n,
        L_n=row.L,
        kbar=row.Kbar,
        beta_hat=beta_hat(row.L, n) if n >= 2 else None,
        lambda_hat=lam_hat,
        sigma_hat_sq=s2,
        tau_hat_sq=t2,
        ci_level=level,
        ci_lo=lo,
        ci_hi=hi,
    )
