"""
轨迹记录 - 检查点统计行、记录计划、审计数据与 CSV/JSON 输出
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from model.params import ModelParams
from model.state import BuffetState
from utils.errors import DomainError
from .functionals import g_of, z_of

CSV_COLUMNS = (
    "n", "W", "lambda", "L", "K", "N", "Kbar", "Z", "G", "L_B",
    "V", "sum_K", "sum_K_sq", "sum_R_sq",
)


@dataclass(frozen=True)
class RecordPlan:
    """检查点：几何网格 ⌈γ^k⌉ 加指定的 n 值，末端总被记录"""

    gamma: float = 1.2
    extra: Tuple[int, ...] = ()
    geometric: bool = True
    counts_only: bool = False
    audit: bool = False
    keep_state: bool = False

    def __post_init__(self):
        if self.geometric and not self.gamma > 1.0:
            raise DomainError(f"几何网格比例必须 > 1: {self.gamma}")

    def checkpoints(self, n_max: int) -> List[int]:
        points = {int(n_max)}
        points.update(int(n) for n in self.extra if 1 <= n <= n_max)
        if self.geometric:
            k = 0
            while True:
                n = math.ceil(self.gamma ** k)
                if n > n_max:
                    break
                points.add(n)
                k += 1
        return sorted(points)


@dataclass(frozen=True)
class StatRow:
    """检查点 n 处的统计量；仅计数模式下与 K 有关的字段为 None"""

    n: int
    W: float
    lambda_: float
    L: int
    N: int
    L_B: Optional[int]
    sum_R_sq: float
    K: Optional[int] = None
    Kbar: Optional[float] = None
    Z: Optional[float] = None
    G: Optional[float] = None
    V: Optional[float] = None
    sum_K: Optional[int] = None
    sum_K_sq: Optional[int] = None

    @classmethod
    def from_state(cls, state: BuffetState, params: ModelParams) -> "StatRow":
        l_b = state.L_B if state.subset is not None else None
        if not state.tracks_dishes:
            return cls(n=state.n, W=state.W_n, lambda_=state.lambda_n, L=state.L_n,
                       N=state.last_N, L_B=l_b, sum_R_sq=state.sum_R_sq.value)
        kbar = state.sum_K / state.n
        z = z_of(state, params)
        return cls(
            n=state.n,
            W=state.W_n,
            lambda_=state.lambda_n,
            L=state.L_n,
            N=state.last_N,
            L_B=l_b,
            sum_R_sq=state.sum_R_sq.value,
            K=state.last_K,
            Kbar=kbar,
            Z=z,
            G=g_of(state, params),
            V=kbar - z,
            sum_K=state.sum_K,
            sum_K_sq=state.sum_K_sq,
        )

    @property
    def R_bar(self) -> float:
        return self.W / self.n

    def to_dict(self) -> Dict[str, Any]:
        values = asdict(self)
        values["lambda"] = values.pop("lambda_")
        return {name: values[name] for name in CSV_COLUMNS}


@dataclass
class TrajectoryAudit:
    """逐步审计：Λ 路径、权重路径、纳入概率极值、最后一次 N_i > 1/(1−β)"""

    lambdas: List[float]
    weights: List[float] = field(default_factory=list)
    cumulative_weights: List[float] = field(default_factory=list)
    prob_min: float = math.inf
    prob_max: float = -math.inf
    last_big_N_index: int = 0

    @classmethod
    def start(cls, params: ModelParams, n_max: int) -> "TrajectoryAudit":
        return cls(lambdas=[params.alpha])

    def observe_probabilities(self, probs: np.ndarray):
        if probs.size:
            self.prob_min = min(self.prob_min, float(probs.min()))
            self.prob_max = max(self.prob_max, float(probs.max()))

    def observe_step(self, state: BuffetState, big_n: float):
        self.lambdas.append(state.lambda_n)
        self.weights.append(state.last_R)
        self.cumulative_weights.append(state.W_n)
        if state.last_N > big_n:
            self.last_big_N_index = state.n

    def lambda_strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.lambdas) < 0))

    def max_bound_ratio(self, bound_constant: float, beta: float) -> float:
        """max_n Λ_n n^{1−β}/D，n ≥ 1；≤ 1 即满足上界"""
        lam = np.asarray(self.lambdas[1:])
        n = np.arange(1, len(lam) + 1, dtype=float)
        return float(np.max(lam * n ** (1.0 - beta)) / bound_constant)

    def max_increment_scaled(self, beta: float) -> float:
        """max_n n^{2−β}|Λ_{n+1} − Λ_n|，n ≥ 1"""
        lam = np.asarray(self.lambdas[1:])
        if lam.size < 2:
            return 0.0
        n = np.arange(1, lam.size, dtype=float)
        return float(np.max(n ** (2.0 - beta) * np.abs(np.diff(lam))))

    def cid_residuals(self, params: ModelParams) -> np.ndarray:
        """Λ_{n+1} 与 Λ_n(1 − (R_{n+1}−β)/(c+Σ_{i≤n+1}R_i)) 的相对残差"""
        lam = np.asarray(self.lambdas)
        weights = np.asarray(self.weights)
        totals = np.asarray(self.cumulative_weights)
        predicted = lam[:-1] * (1.0 - (weights - params.beta) / (params.c + totals))
        return np.abs(lam[1:] - predicted) / lam[1:]


@dataclass
class Trajectory:
    """一条模拟轨迹的检查点记录"""

    params: ModelParams
    seed: int
    stream_id: int
    rows: List[StatRow]
    counts_only: bool = False
    audit: Optional[TrajectoryAudit] = None
    final_state: Optional[BuffetState] = None

    @property
    def final(self) -> StatRow:
        return self.rows[-1]

    def row_at(self, n: int) -> StatRow:
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(f"未记录检查点 n={n}")

    def to_csv_text(self) -> str:
        """CSV 文本，浮点数保留 17 位有效数字"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([_format_cell(v) for v in row.to_dict().values()])
        return buffer.getvalue()

    def to_json_dict(self, provenance: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "stream_id": self.stream_id,
            "counts_only": self.counts_only,
            "config": provenance,
            "columns": list(CSV_COLUMNS),
            "rows": [row.to_dict() for row in self.rows],
        }

    def write_csv(self, path: str):
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(self.to_csv_text())

    def write_json(self, path: str, provenance: Optional[Dict[str, Any]] = None):
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_json_dict(provenance), handle, indent=2, sort_keys=False)
            handle.write("\n")


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)
