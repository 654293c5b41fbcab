"""
套件报告 - 判定、统计量、阈值与可复现信息
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class Verdict(Enum):
    """判定枚举"""
    PASS = "pass"
    FAIL = "fail"
    UNDERPOWERED = "underpowered"
    REPORT_ONLY = "report-only"


def plain(value: Any) -> Any:
    """把 numpy 标量/数组与元组转成可 JSON 化的内置类型"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Enum):
        return value.value
    return value


@dataclass
class SuiteReport:
    """一个验证套件的结果"""

    suite: str
    params: Dict[str, Any]
    n: Any
    reps: int
    statistics: Dict[str, Any]
    thresholds: Dict[str, Any]
    verdict: Verdict
    base_seed: int
    mode: str = "full"
    notes: List[str] = field(default_factory=list)
    case: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    @property
    def stream_ids(self) -> str:
        return f"0..{self.reps - 1}" if self.reps > 1 else "0"

    def to_dict(self) -> Dict[str, Any]:
        return plain({
            "suite": self.suite,
            "case": self.case,
            "verdict": self.verdict.value,
            "params": self.params,
            "n": self.n,
            "reps": self.reps,
            "mode": self.mode,
            "seeds": {"base_seed": self.base_seed, "stream_ids": self.stream_ids},
            "statistics": self.statistics,
            "thresholds": self.thresholds,
            "notes": self.notes,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary_text(self) -> str:
        """人类可读摘要"""
        name = self.case or self.suite
        lines = [f"[{self.verdict.value.upper()}] {name} (suite={self.suite}, n={self.n}, reps={self.reps})"]
        for key, value in self.statistics.items():
            if isinstance(value, (dict, list)):
                continue
            if isinstance(value, float):
                lines.append(f"    {key:<28} {value:.6g}")
            else:
                lines.append(f"    {key:<28} {value}")
        for note in self.notes:
            lines.append(f"    note: {note}")
        return "\n".join(lines)
