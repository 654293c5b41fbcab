"""
随机数流 - 以 (seed, stream_id) 为键的计数器型生成器
"""

import copy
from typing import Any, Dict, Optional

import numpy as np

from utils.errors import DomainError

_UINT64_MAX = 2 ** 64 - 1


class RngStream:
    """可拆分随机数流

    Philox 是计数器型生成器，密钥由 SeedSequence(seed, spawn_key=(stream_id,))
    派生，同一对 (seed, stream_id) 在任何线程调度下产生同一序列。
    """

    def __init__(self, seed: int, stream_id: int = 0):
        """初始化随机数流"""
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if not isinstance(value, (int, np.integer)) or not (0 <= value <= _UINT64_MAX):
                raise DomainError(f"{name} 必须是 64 位无符号整数: {value!r}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def random(self, size: Optional[int] = None):
        """[0,1) 上的均匀变量"""
        return self.generator.random(size)

    def uniform(self, low: float, high: float, size: Optional[int] = None):
        """[low,high) 上的均匀变量"""
        return self.generator.uniform(low, high, size)

    def standard_normal(self, size: Optional[int] = None):
        """标准正态变量"""
        return self.generator.standard_normal(size)

    def copy(self) -> "RngStream":
        """复制当前状态（含计数器）"""
        return copy.deepcopy(self)

    def snapshot(self) -> Dict[str, Any]:
        """生成器内部状态"""
        return self.generator.bit_generator.state

    def __eq__(self, other) -> bool:
        if not isinstance(other, RngStream):
            return NotImplemented
        return (self.seed, self.stream_id) == (other.seed, other.stream_id) and \
            _states_equal(self.snapshot(), other.snapshot())

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def _states_equal(a: Any, b: Any) -> bool:
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(_states_equal(a[k], b[k]) for k in a)
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b
