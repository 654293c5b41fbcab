"""
工具模块 - 日志、配置与异常
"""

from .logger import Logger
from .config import Config, Thresholds
from .errors import (
    IBPError,
    DomainError,
    InvalidParametersError,
    InvalidSubsetError,
    ConfigError,
    InapplicableSuiteError,
    ResourceLimitError,
)

__all__ = [
    'Logger',
    'Config',
    'Thresholds',
    'IBPError',
    'DomainError',
    'InvalidParametersError',
    'InvalidSubsetError',
    'ConfigError',
    'InapplicableSuiteError',
    'ResourceLimitError',
]
