"""
自助餐状态 - F_n 的充分统计量、Λ_n 与纳入概率
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from numerics.rng import RngStream
from numerics.special import gamma_ratio
from numerics.summation import CompensatedSum
from utils.errors import DomainError
from .dish import Dish, DishTable
from .params import IntervalSet, ModelParams


def lambda_of(params: ModelParams, W: float) -> float:
    """Λ = α Γ(c+1)Γ(c+β+W) / (Γ(c+β)Γ(c+1+W))，W 为累计权重"""
    if not np.isfinite(W) or W < 0:
        raise DomainError(f"累计权重必须非负: {W}")
    if W == 0:
        return params.alpha
    shift = 1.0 - params.beta
    x0 = params.c + params.beta
    return params.alpha * gamma_ratio(x0, shift) / gamma_ratio(x0 + W, shift)


@dataclass(frozen=True)
class CustomerOutcome:
    """第 n+1 位顾客的选择结果"""

    customer_index: int
    K: int
    N: int
    repeat_dish_ids: Tuple[int, ...]
    new_dish_labels: Tuple[float, ...]
    R: float


class BuffetState:
    """加权 IBP 的马尔可夫状态"""

    def __init__(self, params: ModelParams, rng: RngStream, capacity_limit: int,
                 track_dishes: bool = True):
        """初始化空自助餐 (n = 0, Λ₀ = α)"""
        self.n = 0
        self.W = CompensatedSum()
        self.lambda_n = params.alpha
        self.dishes: Optional[DishTable] = DishTable(capacity_limit) if track_dishes else None
        self.capacity_limit = capacity_limit
        self.weighted_K_sum = CompensatedSum()
        self.sum_R_sq = CompensatedSum()
        self.sum_K = 0
        self.sum_K_sq = 0
        self.L_n = 0
        self.subset: Optional[IntervalSet] = params.subset
        self.L_B = 0
        self.last_K = 0
        self.last_N = 0
        self.last_R = 0.0
        self.rng = rng

    @property
    def W_n(self) -> float:
        return self.W.value

    @property
    def tracks_dishes(self) -> bool:
        return self.dishes is not None

    def copy(self, rng: Optional[RngStream] = None) -> "BuffetState":
        """复制状态；给定 rng 时换用新的随机数流"""
        clone = object.__new__(BuffetState)
        clone.__dict__.update(self.__dict__)
        for name in ("W", "weighted_K_sum", "sum_R_sq"):
            src = getattr(self, name)
            dst = CompensatedSum()
            dst._sum, dst._comp = src._sum, src._comp
            setattr(clone, name, dst)
        clone.dishes = self.dishes.copy() if self.dishes is not None else None
        clone.rng = rng if rng is not None else self.rng.copy()
        return clone

    def get_info(self) -> Dict[str, Any]:
        """获取状态信息"""
        return {
            'n': self.n,
            'W': self.W_n,
            'lambda': self.lambda_n,
            'L': self.L_n,
            'L_B': self.L_B if self.subset is not None else None,
            'sum_K': self.sum_K,
            'sum_K_sq': self.sum_K_sq,
            'weighted_K_sum': self.weighted_K_sum.value,
            'sum_R_sq': self.sum_R_sq.value,
            'stream_id': self.rng.stream_id,
        }

    def __str__(self) -> str:
        return f"BuffetState(n={self.n}, L={self.L_n}, W={self.W_n:.6g}, lambda={self.lambda_n:.6g})"

    def __repr__(self) -> str:
        return self.__str__()


def inclusion_probability(dish: Dish, state: BuffetState, params: ModelParams) -> float:
    """(Σ R_i M_i{x} − β)/(Σ R_i + c)"""
    return (dish.weighted_count - params.beta) / (state.W_n + params.c)


def inclusion_probabilities(state: BuffetState, params: ModelParams) -> np.ndarray:
    """全部已有菜品的纳入概率"""
    if state.dishes is None or len(state.dishes) == 0:
        return np.empty(0)
    return (state.dishes.weighted_counts - params.beta) / (state.W_n + params.c)
