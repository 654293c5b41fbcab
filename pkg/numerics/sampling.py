"""
抽样函数 - 泊松、伯努利与正态抽样
"""

import math

import numpy as np

from utils.errors import DomainError
from .rng import RngStream


def poisson_sample(lam: float, rng: RngStream) -> int:
    """Poisson(lam) 变量；lam = 0 时确定返回 0

    numpy 的泊松抽样在 lam < 10 时用逐项反演，否则用变换拒绝法 (PTRS)。
    """
    if not math.isfinite(lam) or lam < 0:
        raise DomainError(f"poisson_sample 要求 lambda 为非负有限实数: {lam}")
    if lam == 0:
        return 0
    return int(rng.generator.poisson(lam))


def bernoulli_sample(p: np.ndarray, rng: RngStream) -> np.ndarray:
    """对每个成功概率独立抽取一次伯努利"""
    p = np.asarray(p, dtype=float)
    if p.size and (np.any(p < 0) or np.any(p > 1) or not np.all(np.isfinite(p))):
        raise DomainError("bernoulli_sample 要求概率在 [0,1] 内")
    return rng.random(p.size) < p


def normal_sample(rng: RngStream, size: int) -> np.ndarray:
    """标准正态样本"""
    if size < 0:
        raise DomainError(f"样本量不能为负: {size}")
    return rng.standard_normal(size)
