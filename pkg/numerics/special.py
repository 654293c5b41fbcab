"""
特殊函数 - 对数伽马、伽马比、h(x)、标准正态分布函数及其分位数
"""

import math

from scipy import special

from utils.errors import DomainError


def _require_finite(name: str, x: float):
    if not math.isfinite(x):
        raise DomainError(f"{name} 必须是有限实数: {x}")


def log_gamma(x: float) -> float:
    """ln Γ(x)，x > 0"""
    _require_finite("x", x)
    if x <= 0:
        raise DomainError(f"log_gamma 要求 x > 0: {x}")
    return float(special.gammaln(x))


def gamma_ratio(x: float, delta: float) -> float:
    """Γ(x+delta)/Γ(x)

    用 Pochhammer 符号直接计算，x 很大时不会出现两个对数伽马相减的抵消误差。
    """
    _require_finite("x", x)
    _require_finite("delta", delta)
    if x <= 0 or x + delta <= 0:
        raise DomainError(f"gamma_ratio 要求 x > 0 且 x+delta > 0: x={x}, delta={delta}")
    return float(special.poch(x, delta))


def h_of(x: float, beta: float) -> float:
    """h(x)：Γ(x+β)/Γ(x+1) = x^{β−1}(1+h(x))，x > max(0, −β)"""
    _require_finite("x", x)
    _require_finite("beta", beta)
    if x <= max(0.0, -beta):
        raise DomainError(f"h_of 要求 x > max(0, -beta): x={x}, beta={beta}")
    # Γ(x+β)/Γ(x+1) = 1/poch(x+β, 1−β)
    log_ratio = (1.0 - beta) * math.log(x) - math.log(gamma_ratio(x + beta, 1.0 - beta))
    return math.expm1(log_ratio)


def normal_cdf(x: float) -> float:
    """标准正态分布函数 Φ(x)"""
    if math.isnan(x):
        raise DomainError("normal_cdf 不接受 NaN")
    return float(special.ndtr(x))


def normal_quantile(p: float) -> float:
    """Φ⁻¹(p)，0 < p < 1"""
    if not (0.0 < p < 1.0):
        raise DomainError(f"normal_quantile 要求 0 < p < 1: {p}")
    return float(special.ndtri(p))
