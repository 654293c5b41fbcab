"""
验收目录 - 各验收配置的命名用例
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

from model.params import IntervalSet, ModelParams, WeightSpec
from utils.config import Thresholds
from . import suites
from .report import SuiteReport

_STANDARD = ModelParams(alpha=1.0, beta=0.5, c=1.0, weights=WeightSpec.constant(1.0))
_WEIGHTED = ModelParams(alpha=1.0, beta=0.25, c=1.0, weights=WeightSpec.two_point(1.0, 2.0, 0.5))


@dataclass(frozen=True)
class AcceptanceCase:
    """一个验收用例：套件名、参数与规模"""

    name: str
    suite: str
    params: ModelParams
    n: int = 0
    reps: int = 1
    horizons: Tuple[int, ...] = ()
    options: Dict[str, Any] = field(default_factory=dict)


CATALOGUE: Dict[str, AcceptanceCase] = {case.name: case for case in (
    AcceptanceCase("poisson_oracle", "poisson_oracle",
                   ModelParams(alpha=2.0, beta=0.5, c=1.0, weights=WeightSpec.constant(1.0)),
                   n=500, reps=2000),
    AcceptanceCase("slln_ln", "slln_Ln",
                   _STANDARD.replace(subset=IntervalSet(((0.0, 0.5),))),
                   reps=200, horizons=(100, 1000, 10000)),
    AcceptanceCase("clt_ln", "clt_Ln",
                   _STANDARD.replace(subset=IntervalSet(((0.0, 0.5),))),
                   n=10000, reps=1000),
    AcceptanceCase("kbar_predictive", "clt_Kbar", _WEIGHTED, n=5000, reps=1000,
                   options={"branches": ("predictive",), "proxy_factor": None}),
    AcceptanceCase("kbar_degenerate", "clt_Kbar", _STANDARD, n=10000, reps=500,
                   options={"branches": ("predictive",), "proxy_factor": None}),
    AcceptanceCase("ci_coverage", "clt_Kbar", _WEIGHTED, n=5000, reps=500,
                   options={"branches": ("limit",), "proxy_factor": 10}),
    AcceptanceCase("cid_beta0", "cid_identity",
                   ModelParams(alpha=1.0, beta=0.0, c=1.0, weights=WeightSpec.uniform(1.0, 2.0)),
                   n=1000),
    AcceptanceCase("cid_standard", "cid_identity", _STANDARD, n=1000),
    AcceptanceCase("finite_buffet", "finite_buffet",
                   ModelParams(alpha=1.0, beta=-1.0, c=2.0, weights=WeightSpec.constant(1.0)),
                   n=2000, reps=500),
    AcceptanceCase("beta_hat", "beta_hat", _STANDARD, reps=100, horizons=(1000, 10000, 100000)),
    AcceptanceCase("invariants", "invariants", _WEIGHTED, n=1000, reps=1000),
)}


def run_case(case: AcceptanceCase, base_seed: int, parallelism: int = 1,
             thresholds: Optional[Thresholds] = None, params: Optional[ModelParams] = None,
             n: Optional[int] = None, reps: Optional[int] = None,
             horizons: Optional[Tuple[int, ...]] = None,
             proxy_factor: Optional[int] = None, level: Optional[float] = None) -> SuiteReport:
    """运行一个用例；显式给出的参数覆盖目录中的值"""
    params = params or case.params
    n = n or case.n
    reps = reps or case.reps
    horizons = horizons or case.horizons
    options = dict(case.options)
    if proxy_factor is not None and options.get("proxy_factor") is not None:
        options["proxy_factor"] = proxy_factor
    if level is not None:
        options["level"] = level

    common = dict(base_seed=base_seed, thresholds=thresholds)
    if case.suite == "poisson_oracle":
        report = suites.suite_poisson_oracle(params, n, reps, parallelism=parallelism, **common)
    elif case.suite == "slln_Ln":
        report = suites.suite_slln_Ln(params, horizons, reps, parallelism=parallelism, **common)
    elif case.suite == "clt_Ln":
        report = suites.suite_clt_Ln(params, n, reps, parallelism=parallelism, **common)
    elif case.suite == "clt_Kbar":
        report = suites.suite_clt_Kbar(params, n, reps, parallelism=parallelism,
                                       **options, **common)
    elif case.suite == "cid_identity":
        report = suites.suite_cid_identity(params, n, **common)
    elif case.suite == "finite_buffet":
        report = suites.suite_finite_buffet(params, n, reps, parallelism=parallelism, **common)
    elif case.suite == "beta_hat":
        report = suites.suite_beta_hat(params, horizons, reps, parallelism=parallelism, **common)
    elif case.suite == "invariants":
        report = suites.suite_invariants(params, n, reps, parallelism=parallelism, **common)
    else:
        raise KeyError(f"未知套件: {case.suite}")
    return replace(report, case=case.name)
