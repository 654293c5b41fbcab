"""
轨迹泛函 - Z_n、G_n、L_n(B) 与 K_{n+1} 的条件二阶矩
"""

from model.params import IntervalSet, ModelParams
from model.state import BuffetState, inclusion_probabilities
from utils.errors import DomainError, InvalidSubsetError


def _require_dishes(state: BuffetState, what: str):
    if not state.tracks_dishes:
        raise DomainError(f"{what} 需要完整菜品表（仅计数模式不记录 K）")


def z_of(state: BuffetState, params: ModelParams) -> float:
    """Z_n = E(K_{n+1}|F_n) = ν_n(X) = Λ_n + (Σ R_i K_i − β L_n)/(Σ R_i + c)"""
    _require_dishes(state, "z_of")
    if state.n == 0:
        return state.lambda_n
    atomic = (state.weighted_K_sum.value - params.beta * state.L_n) / (state.W_n + params.c)
    return state.lambda_n + atomic


def z_of_raw(state: BuffetState, params: ModelParams) -> float:
    """直接由菜品表重算 Z_n"""
    _require_dishes(state, "z_of_raw")
    return state.lambda_n + float(inclusion_probabilities(state, params).sum())


def g_of(state: BuffetState, params: ModelParams) -> float:
    """G_n = Σ_{x∈S_n} J_n(x)²"""
    _require_dishes(state, "g_of")
    probs = inclusion_probabilities(state, params)
    return float((probs * probs).sum())


def l_of_B(state: BuffetState, subset: IntervalSet) -> int:
    """L_n(B) = card(B ∩ S_n)"""
    if not isinstance(subset, IntervalSet):
        raise InvalidSubsetError(f"子集必须是 IntervalSet: {subset!r}")
    if state.tracks_dishes:
        return int(subset.contains(state.dishes.labels).sum())
    if subset == state.subset:
        return state.L_B
    raise DomainError("仅计数模式只记录参数中给定子集的 L_n(B)")


def conditional_second_moment(state: BuffetState, params: ModelParams) -> float:
    """E(K_{n+1}²|F_n) = Z_n + Z_n² − G_n"""
    z = z_of(state, params)
    return z + z * z - g_of(state, params)
