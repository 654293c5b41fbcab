"""
蒙特卡洛模块 - 并行重复实验与验证套件
"""

from .goodness import ks_test, chi_square_poisson, normal_cdf_with_variance, ChiSquareResult
from .replicates import ReplicateSample, run_replicates, replicate_trajectories, parallel_map
from .report import SuiteReport, Verdict
from .suites import (
    suite_poisson_oracle,
    suite_slln_Ln,
    suite_clt_Ln,
    suite_clt_Kbar,
    suite_cid_identity,
    suite_finite_buffet,
    suite_beta_hat,
    suite_invariants,
    log_gamma_recurrence_residual,
)
from .acceptance import AcceptanceCase, CATALOGUE, run_case

__all__ = [
    'ks_test',
    'chi_square_poisson',
    'normal_cdf_with_variance',
    'ChiSquareResult',
    'ReplicateSample',
    'run_replicates',
    'replicate_trajectories',
    'parallel_map',
    'SuiteReport',
    'Verdict',
    'suite_poisson_oracle',
    'suite_slln_Ln',
    'suite_clt_Ln',
    'suite_clt_Kbar',
    'suite_cid_identity',
    'suite_finite_buffet',
    'suite_beta_hat',
    'suite_invariants',
    'log_gamma_recurrence_residual',
    'AcceptanceCase',
    'CATALOGUE',
    'run_case',
]
