"""
拟合优度检验 - 单样本 KS 检验与泊松卡方检验
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import stats

from numerics.special import normal_cdf
from utils.errors import DomainError


def ks_test(samples: Sequence[float], cdf: Callable[[float], float]) -> Tuple[float, float]:
    """D = sup|F_emp − cdf|，p 值取 Kolmogorov 渐近分布的上尾"""
    values = np.sort(np.asarray(samples, dtype=float))
    m = values.size
    if m == 0:
        raise DomainError("ks_test 需要非空样本")
    if not np.all(np.isfinite(values)):
        raise DomainError("ks_test 样本含非有限值")
    theoretical = np.array([cdf(float(x)) for x in values])
    upper = np.arange(1, m + 1) / m - theoretical
    lower = theoretical - np.arange(0, m) / m
    d = float(max(upper.max(), lower.max()))
    p = float(stats.kstwobign.sf(math.sqrt(m) * d))
    return d, p


def normal_cdf_with_variance(variance: float) -> Callable[[float], float]:
    """N(0, variance) 的分布函数"""
    if not variance > 0:
        raise DomainError(f"方差必须为正: {variance}")
    scale = math.sqrt(variance)
    return lambda x: normal_cdf(x / scale)


@dataclass(frozen=True)
class ChiSquareResult:
    """卡方检验结果"""

    statistic: float
    dof: int
    p_value: float
    bins: List[Tuple[int, int]]
    observed: List[int]
    expected: List[float]


def chi_square_poisson(values: Sequence[int], mu: float,
                       min_expected: float = 5.0) -> ChiSquareResult:
    """整数样本对 Poisson(mu) 的卡方检验，相邻格合并到期望数 >= min_expected

    bins 中每格为闭区间 [lo, hi]，末格 hi = -1 表示右尾。
    """
    counts = np.asarray(values, dtype=np.int64)
    reps = counts.size
    if reps == 0:
        raise DomainError("卡方检验需要非空样本")
    top = int(max(stats.poisson.ppf(1.0 - 1e-12, mu), counts.max())) + 1
    support = np.arange(top)
    expected = reps * stats.poisson.pmf(support, mu)
    expected_tail = reps * stats.poisson.sf(top - 1, mu)
    observed = np.bincount(np.minimum(counts, top), minlength=top + 1)

    bins, obs, exp = [], [], []
    lo, acc_o, acc_e = 0, 0, 0.0
    for k in range(top + 1):
        acc_o += int(observed[k])
        acc_e += float(expected[k]) if k < top else float(expected_tail)
        if acc_e >= min_expected and k < top:
            bins.append((lo, k))
            obs.append(acc_o)
            exp.append(acc_e)
            lo, acc_o, acc_e = k + 1, 0, 0.0
    # 剩余右尾并入最后一格
    if bins:
        last_lo, _ = bins[-1]
        bins[-1] = (last_lo, -1)
        obs[-1] += acc_o
        exp[-1] += acc_e
    else:
        bins.append((0, -1))
        obs.append(acc_o)
        exp.append(acc_e)

    obs_arr = np.asarray(obs, dtype=float)
    exp_arr = np.asarray(exp, dtype=float)
    statistic = float(np.sum((obs_arr - exp_arr) ** 2 / exp_arr))
    dof = len(bins) - 1
    p_value = float(stats.chi2.sf(statistic, dof)) if dof >= 1 else math.nan
    return ChiSquareResult(statistic, dof, p_value, bins, obs, [float(e) for e in exp])
