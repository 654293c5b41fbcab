"""
数值模块 - 特殊函数、随机数流与抽样
"""

from .special import log_gamma, gamma_ratio, h_of, normal_cdf, normal_quantile
from .rng import RngStream
from .sampling import poisson_sample, bernoulli_sample, normal_sample
from .summation import CompensatedSum

__all__ = [
    'log_gamma',
    'gamma_ratio',
    'h_of',
    'normal_cdf',
    'normal_quantile',
    'RngStream',
    'poisson_sample',
    'bernoulli_sample',
    'normal_sample',
    'CompensatedSum',
]
