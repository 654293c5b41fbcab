"""
估计模块 - 推断量与置信区间
"""

from .estimates import (
    a_n,
    lambda_limit,
    beta_hat,
    sigma_hat_sq,
    tau_hat_sq,
    confidence_interval,
    EstimateReport,
    estimate_from_row,
)

__all__ = [
    'a_n',
    'lambda_limit',
    'beta_hat',
    'sigma_hat_sq',
    'tau_hat_sq',
    'confidence_interval',
    'EstimateReport',
    'estimate_from_row',
]
