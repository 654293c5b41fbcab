"""
模型参数 - (α, β, c)、权重分布、子集 B，以及各定理前提的判定
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from numerics.rng import RngStream
from utils.errors import InvalidParametersError, InvalidSubsetError


class WeightKind(Enum):
    """权重分布类型枚举"""
    CONSTANT = "const"
    UNIFORM = "unif"
    TWO_POINT = "twopoint"


_ARITY = {WeightKind.CONSTANT: 1, WeightKind.UNIFORM: 2, WeightKind.TWO_POINT: 3}


@dataclass(frozen=True)
class WeightSpec:
    """顾客权重 R_n 的分布：Constant(r)、UniformInterval(u,b)、TwoPoint(v1,v2,p)

    TwoPoint 中 p 是取 v1 的概率。
    """

    kind: WeightKind
    values: Tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != _ARITY[self.kind]:
            raise InvalidParametersError(
                f"{self.kind.value} 权重需要 {_ARITY[self.kind]} 个参数: {self.values}")
        if not all(np.isfinite(v) for v in self.values):
            raise InvalidParametersError(f"权重参数必须有限: {self.values}")
        if self.kind is WeightKind.UNIFORM:
            u, b = self.values
            if not u <= b:
                raise InvalidParametersError("uniform weights must satisfy u <= b")
        if self.kind is WeightKind.TWO_POINT:
            if not 0.0 < self.values[2] < 1.0:
                raise InvalidParametersError("two-point weights must satisfy 0 < p < 1")
        if self.lower_bound <= 0:
            raise InvalidParametersError("weights must satisfy u > 0")

    @classmethod
    def constant(cls, r: float) -> "WeightSpec":
        return cls(WeightKind.CONSTANT, (float(r),))

    @classmethod
    def uniform(cls, u: float, b: float) -> "WeightSpec":
        return cls(WeightKind.UNIFORM, (float(u), float(b)))

    @classmethod
    def two_point(cls, v1: float, v2: float, p: float) -> "WeightSpec":
        return cls(WeightKind.TWO_POINT, (float(v1), float(v2), float(p)))

    @classmethod
    def parse(cls, text: str) -> "WeightSpec":
        """解析 const:r | unif:u,b | twopoint:v1,v2,p"""
        try:
            head, _, tail = text.strip().partition(":")
            kind = WeightKind(head.strip().lower())
            values = tuple(float(v) for v in tail.split(","))
        except ValueError:
            raise InvalidParametersError(
                f"无法解析权重 {text!r}: 应为 const:r | unif:u,b | twopoint:v1,v2,p")
        return cls(kind, values)

    def to_text(self) -> str:
        return f"{self.kind.value}:" + ",".join(repr(v) for v in self.values)

    @property
    def lower_bound(self) -> float:
        """u"""
        if self.kind is WeightKind.TWO_POINT:
            return min(self.values[0], self.values[1])
        return self.values[0]

    @property
    def upper_bound(self) -> float:
        """b"""
        if self.kind is WeightKind.CONSTANT:
            return self.values[0]
        if self.kind is WeightKind.UNIFORM:
            return self.values[1]
        return max(self.values[0], self.values[1])

    @property
    def mean(self) -> float:
        """r = E(R)"""
        if self.kind is WeightKind.CONSTANT:
            return self.values[0]
        if self.kind is WeightKind.UNIFORM:
            u, b = self.values
            return 0.5 * (u + b)
        v1, v2, p = self.values
        return p * v1 + (1.0 - p) * v2

    @property
    def second_moment(self) -> float:
        """q = E(R²)"""
        if self.kind is WeightKind.CONSTANT:
            return self.values[0] ** 2
        if self.kind is WeightKind.UNIFORM:
            u, b = self.values
            return (u * u + u * b + b * b) / 3.0
        v1, v2, p = self.values
        return p * v1 * v1 + (1.0 - p) * v2 * v2

    @property
    def is_constant(self) -> bool:
        return self.kind is WeightKind.CONSTANT or self.lower_bound == self.upper_bound

    def draw(self, rng: RngStream) -> float:
        """抽取一个权重；常数权重不消耗随机数"""
        if self.kind is WeightKind.CONSTANT:
            return self.values[0]
        if self.kind is WeightKind.UNIFORM:
            return float(rng.uniform(self.values[0], self.values[1]))
        v1, v2, p = self.values
        return v1 if rng.random() < p else v2


@dataclass(frozen=True)
class IntervalSet:
    """[0,1] 中互不相交的闭区间并，m 为 [0,1] 上的均匀测度"""

    intervals: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted((float(lo), float(hi)) for lo, hi in self.intervals))
        for lo, hi in ordered:
            if not (0.0 <= lo <= hi <= 1.0):
                raise InvalidSubsetError(f"区间必须位于 [0,1] 内且 lo <= hi: [{lo}, {hi}]")
        for (_, prev_hi), (lo, _) in zip(ordered, ordered[1:]):
            if lo < prev_hi:
                raise InvalidSubsetError(f"区间重叠: {prev_hi} > {lo}")
        object.__setattr__(self, "intervals", ordered)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """解析 "lo:hi,lo:hi"；空串或 "empty" 表示空集"""
        text = text.strip()
        if text in ("", "empty"):
            return cls(())
        try:
            pairs = []
            for part in text.split(","):
                lo, hi = part.split(":")
                pairs.append((float(lo), float(hi)))
        except ValueError:
            raise InvalidSubsetError(f"无法解析子集 {text!r}: 应为 lo:hi[,lo:hi...]")
        return cls(tuple(pairs))

    @classmethod
    def whole(cls) -> "IntervalSet":
        return cls(((0.0, 1.0),))

    def to_text(self) -> str:
        if not self.intervals:
            return "empty"
        return ",".join(f"{lo!r}:{hi!r}" for lo, hi in self.intervals)

    @property
    def measure(self) -> float:
        """m(B)"""
        return float(sum(hi - lo for lo, hi in self.intervals))

    def contains(self, labels: np.ndarray) -> np.ndarray:
        labels = np.asarray(labels, dtype=float)
        mask = np.zeros(labels.shape, dtype=bool)
        for lo, hi in self.intervals:
            mask |= (labels >= lo) & (labels <= hi)
        return mask


@dataclass(frozen=True)
class ModelParams:
    """加权 IBP 参数"""

    alpha: float
    beta: float
    c: float
    weights: WeightSpec = field(default_factory=lambda: WeightSpec.constant(1.0))
    subset: Optional[IntervalSet] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "c": self.c,
            "weights": self.weights.to_text(),
            "subset": self.subset.to_text() if self.subset is not None else None,
        }

    def replace(self, **changes) -> "ModelParams":
        values = dict(alpha=self.alpha, beta=self.beta, c=self.c,
                      weights=self.weights, subset=self.subset)
        values.update(changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class TheoremApplicability:
    """各极限定理前提是否满足"""

    model_valid: bool
    thm43_ok: bool
    thm44_ok: bool
    thm51_ok: bool
    thm51_standard_ok: bool
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model_valid": self.model_valid,
            "thm43_ok": self.thm43_ok,
            "thm44_ok": self.thm44_ok,
            "thm51_ok": self.thm51_ok,
            "thm51_standard_ok": self.thm51_standard_ok,
            "notes": list(self.notes),
        }


def constraint_violations(params: ModelParams) -> List[str]:
    """列出被违反的模型约束"""
    violations = []
    if not np.isfinite(params.alpha) or not params.alpha > 0:
        violations.append("alpha must satisfy alpha > 0")
    if not np.isfinite(params.beta) or not params.beta < 1:
        violations.append("beta must satisfy beta < 1")
    if not np.isfinite(params.c) or not params.c > -params.beta:
        violations.append("c must satisfy c > -beta")
    if not params.weights.lower_bound > max(params.beta, 0.0):
        violations.append("weights lower bound u must satisfy u > max(beta, 0)")
    return violations


def validate_params(params: ModelParams) -> TheoremApplicability:
    """检查模型约束并给出各定理的适用性

    权重族都是独立同分布且有界的，L_n 极限定理所需的权重条件（均值恒为 r）
    在 β ∈ [0,1) 时自动成立。
    """
    violations = constraint_violations(params)
    if violations:
        raise InvalidParametersError("; ".join(violations))

    beta = params.beta
    weights = params.weights
    notes = []
    thm43_ok = 0.0 <= beta < 1.0
    thm44_ok = thm43_ok
    if not thm43_ok:
        notes.append("L_n limit theorems require 0 <= beta < 1")
    # 有界性由权重族保证 (sup R_n <= b)
    thm51_ok = beta < 0.5
    unit_weights = weights.kind is WeightKind.CONSTANT and weights.values[0] == 1.0
    # R≡1 时 K̄_n 的结论对所有 β < 1 成立
    thm51_standard_ok = thm51_ok or unit_weights
    if not thm51_ok:
        notes.append("K-bar limit theorems with general weights require beta < 1/2")
    return TheoremApplicability(
        model_valid=True,
        thm43_ok=thm43_ok,
        thm44_ok=thm44_ok,
        thm51_ok=thm51_ok,
        thm51_standard_ok=thm51_standard_ok,
        notes=tuple(notes),
    )
