"""
配置管理模块 - 进程级运行设置与验证阈值
"""

import os
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, Optional

import psutil

from .errors import ConfigError

# 每个菜品在表中占用的大致字节数（标签、加权计数、首位顾客）
_BYTES_PER_DISH = 24


@dataclass(frozen=True)
class Thresholds:
    """验证套件判定阈值，全部写入报告"""

    ks_alpha: float = 0.01
    oracle_alpha: float = 0.001
    min_expected: float = 5.0
    min_replicates: int = 100
    slln_tol: float = 0.10
    slln_tol_log: float = 0.25
    clt_var_tol: float = 0.15
    finite_fraction: float = 0.99
    exp_ratio_lo: float = 0.95
    exp_ratio_hi: float = 1.05
    coverage_lo: float = 0.90
    coverage_hi: float = 0.98
    cid_tol: float = 1e-10
    beta_hat_tol: float = 0.15
    bound_rel_tol: float = 1e-12

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"环境变量 {name} 必须是整数: {raw!r}")
    if value <= 0:
        raise ConfigError(f"环境变量 {name} 必须为正: {value}")
    return value


@dataclass
class Config:
    """系统配置类"""

    parallelism: int = 1
    log_level: str = "INFO"
    log_dir: Optional[str] = None
    max_dishes: int = 5_000_000
    thresholds: Thresholds = field(default_factory=Thresholds)

    @classmethod
    def from_env(cls) -> "Config":
        """从环境变量读取配置，缺省并行度取物理核数"""
        cores = psutil.cpu_count(logical=False) or os.cpu_count() or 1
        return cls(
            parallelism=_env_int("IBP_PARALLELISM", cores),
            log_level=os.environ.get("IBP_LOG_LEVEL", "INFO").upper(),
            log_dir=os.environ.get("IBP_LOG_DIR") or None,
            max_dishes=_env_int("IBP_MAX_DISHES", 5_000_000),
        )

    def dish_capacity(self) -> int:
        """菜品表容量上限：配置上限与可用内存的四分之一取小"""
        available = psutil.virtual_memory().available
        by_memory = max(1, available // (4 * _BYTES_PER_DISH))
        return int(min(self.max_dishes, by_memory))
