"""
验证套件 - 把每个极限定理变成可判定的定量检验
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from estimators.estimates import a_n, beta_hat, lambda_limit
from model.buffet import expected_L_path, lambda_bound_constant, run_trajectory, x_h_grid_sup
from model.params import ModelParams, WeightKind, validate_params
from numerics.special import log_gamma
from stats.trajectory import RecordPlan
from utils.config import Thresholds
from utils.errors import InapplicableSuiteError
from utils.logger import Logger
from .goodness import chi_square_poisson, ks_test, normal_cdf_with_variance
from .replicates import replicate_trajectories, run_replicates
from .report import SuiteReport, Verdict

logger = Logger()


def _verdict(ok: bool) -> Verdict:
    return Verdict.PASS if ok else Verdict.FAIL


def _mean_sd(values: np.ndarray) -> Tuple[float, float]:
    sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return float(values.mean()), sd


def _horizons(horizons: Sequence[int]) -> List[int]:
    cleaned = sorted({int(h) for h in horizons})
    if not cleaned or cleaned[0] < 2:
        raise InapplicableSuiteError(f"检查点必须 >= 2: {list(horizons)}")
    return cleaned


def _is_unit_weight(params: ModelParams) -> bool:
    return params.weights.kind is WeightKind.CONSTANT and params.weights.values[0] == 1.0


def suite_poisson_oracle(params: ModelParams, n: int, reps: int, base_seed: int = 0,
                         parallelism: int = 1,
                         thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """常数权重下 L_n ∼ Poi(Σ_{j<n} Λ_j) 的卡方检验"""
    th = thresholds or Thresholds()
    validate_params(params)
    if not params.weights.is_constant:
        raise InapplicableSuiteError("poisson oracle requires constant weights")
    logger.log_suite_event("poisson_oracle", "start", f"n={n}, reps={reps}")

    samples = run_replicates(params, n, reps, base_seed, parallelism, counts_only=True)
    counts = np.array([s.L_n for s in samples])
    mu = float(expected_L_path(params, n)[-1])
    mean = float(counts.mean())
    bound = 3.0 * math.sqrt(mu / reps)
    chi = chi_square_poisson(counts, mu, th.min_expected)
    statistics = {
        "oracle_mean": mu,
        "sample_mean": mean,
        "sample_variance": float(counts.var(ddof=1)) if reps > 1 else 0.0,
        "mean_bound": bound,
        "chi_square": chi.statistic,
        "dof": chi.dof,
        "p_value": chi.p_value,
        "bins": [list(b) for b in chi.bins],
        "observed": chi.observed,
        "expected": chi.expected,
    }
    notes = []
    if reps < th.min_replicates or chi.dof < 1:
        verdict = Verdict.UNDERPOWERED
        notes.append(f"reps={reps} below minimum {th.min_replicates} or fewer than two pooled bins")
    else:
        verdict = _verdict(chi.p_value > th.oracle_alpha and abs(mean - mu) <= bound)
    return SuiteReport("poisson_oracle", params.to_dict(), n, reps, statistics,
                       th.to_dict(), verdict, base_seed, mode="counts", notes=notes)


def suite_slln_Ln(params: ModelParams, horizons: Sequence[int], reps: int,
                  base_seed: int = 0, parallelism: int = 1,
                  thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """L_n/a_n(β) → λ(β)；给定子集 B 时同时检查 L_n(B)/a_n(β) → m(B)λ(β)"""
    th = thresholds or Thresholds()
    applicability = validate_params(params)
    if not applicability.thm43_ok:
        raise InapplicableSuiteError("SLLN for L_n requires 0 <= beta < 1")
    points = _horizons(horizons)
    lam = lambda_limit(params)
    tol = th.slln_tol if params.beta > 0 else th.slln_tol_log
    logger.log_suite_event("slln_Ln", "start", f"horizons={points}, reps={reps}")

    plan = RecordPlan(extra=tuple(points), geometric=False, counts_only=True)
    trajectories = replicate_trajectories(params, points[-1], plan, reps, base_seed, parallelism)

    targets = [("L", lam)]
    if params.subset is not None and params.subset.measure > 0:
        targets.append(("L_B", params.subset.measure * lam))
    statistics: Dict[str, object] = {"lambda": lam}
    ok = True
    for name, limit in targets:
        per_horizon = []
        for h in points:
            ratios = np.array([getattr(t.row_at(h), name) for t in trajectories]) / a_n(params.beta, h)
            mean, sd = _mean_sd(ratios)
            per_horizon.append({"n": h, "mean": mean, "sd": sd,
                                "abs_deviation": abs(mean - limit),
                                "rel_deviation": abs(mean - limit) / limit})
        deviations = [row["abs_deviation"] for row in per_horizon]
        decreasing = all(b < a for a, b in zip(deviations, deviations[1:]))
        final_ok = per_horizon[-1]["rel_deviation"] <= tol
        statistics[name] = {"limit": limit, "horizons": per_horizon,
                            "decreasing": decreasing, "final_within_tolerance": final_ok}
        ok = ok and decreasing and final_ok
    return SuiteReport("slln_Ln", params.to_dict(), points, reps, statistics,
                       th.to_dict(), _verdict(ok), base_seed, mode="counts")


def suite_clt_Ln(params: ModelParams, n: int, reps: int, base_seed: int = 0,
                 parallelism: int = 1,
                 thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """√a_n(β){L_n/a_n(β) − λ(β)} 对 N(0, λ(β)) 的 KS 检验，子集版本方差为 m(B)λ(β)"""
    th = thresholds or Thresholds()
    applicability = validate_params(params)
    if not applicability.thm44_ok:
        raise InapplicableSuiteError("CLT for L_n requires 0 <= beta < 1")
    notes = []
    if params.beta == 0.0:
        notes.append("beta = 0: log n norming converges slowly; verdict is indicative only")
    lam = lambda_limit(params)
    logger.log_suite_event("clt_Ln", "start", f"n={n}, reps={reps}")

    samples = run_replicates(params, n, reps, base_seed, parallelism, counts_only=True)
    targets = [("ln_scaled", lam)]
    if params.subset is not None and params.subset.measure > 0:
        targets.append(("lnB_scaled", params.subset.measure * lam))
    statistics: Dict[str, object] = {"lambda": lam}
    ok = True
    for name, variance in targets:
        values = np.array([getattr(s, name) for s in samples], dtype=float)
        d, p = ks_test(values, normal_cdf_with_variance(variance))
        mean, sd = _mean_sd(values)
        var_rel = abs(sd * sd / variance - 1.0)
        statistics[name] = {"target_variance": variance, "ks_D": d, "p_value": p,
                            "mean": mean, "variance": sd * sd, "variance_rel_error": var_rel}
        ok = ok and p > th.ks_alpha and var_rel <= th.clt_var_tol
    return SuiteReport("clt_Ln", params.to_dict(), n, reps, statistics, th.to_dict(),
                       _verdict(ok), base_seed, mode="counts", notes=notes)


def _percentile_95(values: np.ndarray) -> float:
    return float(np.percentile(np.abs(values), 95))


def suite_clt_Kbar(params: ModelParams, n: int, reps: int, base_seed: int = 0,
                   parallelism: int = 1, proxy_factor: Optional[int] = 10,
                   level: float = 0.95, branches: Sequence[str] = ("predictive", "limit"),
                   thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """K̄_n 的两个中心极限定理与 Z 的置信区间覆盖率

    常数权重时预测分支换成退化分支：τ² = 0，|√n V_n| 的 95% 分位数应随 n 减小；
    极限分支照常运行（σ² > 0）。一般权重且 β ∈ [1/2,1) 时只做探索性报告。
    """
    th = thresholds or Thresholds()
    applicability = validate_params(params)
    statistics: Dict[str, object] = {}
    notes: List[str] = []
    logger.log_suite_event("clt_Kbar", "start", f"n={n}, reps={reps}, branches={list(branches)}")

    ok = True
    degenerate = params.weights.is_constant and applicability.thm51_standard_ok
    if degenerate and "predictive" in branches:
        if n < 20:
            raise InapplicableSuiteError("degenerate branch needs n >= 20 (two horizons n/10, n)")
        early = n // 10
        plan = RecordPlan(extra=(early, n), geometric=False)
        trajectories = replicate_trajectories(params, n, plan, reps, base_seed, parallelism)
        p_early = _percentile_95(np.array([math.sqrt(early) * t.row_at(early).V for t in trajectories]))
        p_late = _percentile_95(np.array([math.sqrt(n) * t.row_at(n).V for t in trajectories]))
        statistics["degenerate"] = {"n_early": early, "p95_early": p_early,
                                    "n_late": n, "p95_late": p_late}
        notes.append("constant weights: tau^2 = 0, sqrt(n) V_n -> 0 in probability")
        ok = p_late < p_early
        if "limit" not in branches:
            return SuiteReport("clt_Kbar", params.to_dict(), [early, n], reps, statistics,
                               th.to_dict(), _verdict(ok), base_seed, notes=notes)

    exploratory = not (applicability.thm51_ok or applicability.thm51_standard_ok)
    use_proxy = exploratory or "limit" in branches
    factor = (proxy_factor or 10) if use_proxy else None
    samples = run_replicates(params, n, reps, base_seed, parallelism,
                             proxy_factor=factor, level=level)

    if exploratory:
        limit_scaled = np.array([math.sqrt(n) * (s.kbar - s.z_proxy) for s in samples])
        vn = np.array([s.vn_scaled for s in samples])
        statistics["exploration"] = {
            "sqrt_n_kbar_minus_proxy_sd": float(limit_scaled.std(ddof=1)) if reps > 1 else 0.0,
            "sqrt_n_vn_sd": float(vn.std(ddof=1)) if reps > 1 else 0.0,
            "sqrt_n_kbar_minus_proxy_p95": _percentile_95(limit_scaled),
        }
        notes.append("beta >= 1/2 with non-unit weights: limit laws need not be Gaussian mixtures; no verdict")
        return SuiteReport("clt_Kbar", params.to_dict(), n, reps, statistics, th.to_dict(),
                           Verdict.REPORT_ONLY, base_seed, notes=notes)

    underpowered = False
    if "predictive" in branches and not degenerate:
        studentized = np.array([s.vn_studentized for s in samples if s.vn_studentized is not None])
        missing = reps - studentized.size
        if studentized.size < th.min_replicates or missing > 0:
            underpowered = True
            notes.append(f"tau_hat = 0 in {missing} replicates")
        d, p = ks_test(studentized, normal_cdf_with_variance(1.0)) if studentized.size else (math.nan, math.nan)
        statistics["predictive"] = {"ks_D": d, "p_value": p, "valid_samples": int(studentized.size)}
        ok = ok and p > th.ks_alpha
    if "limit" in branches:
        studentized = np.array([s.limit_studentized for s in samples if s.limit_studentized is not None])
        covered = np.array([s.covered for s in samples], dtype=bool)
        coverage = float(covered.mean())
        d, p = ks_test(studentized, normal_cdf_with_variance(1.0)) if studentized.size else (math.nan, math.nan)
        statistics["limit"] = {"ks_D": d, "p_value": p, "coverage": coverage,
                               "level": level, "proxy_factor": factor}
        ok = ok and p > th.ks_alpha and th.coverage_lo <= coverage <= th.coverage_hi
        notes.append("z_proxy = K-bar at proxy_factor * n stands in for the random limit Z")
    if not degenerate:
        notes.append("tau_hat_sq is a plug-in analogue of sigma_hat_sq (q in place of 2q)")
    verdict = Verdict.UNDERPOWERED if underpowered else _verdict(ok)
    return SuiteReport("clt_Kbar", params.to_dict(), n, reps, statistics, th.to_dict(),
                       verdict, base_seed, notes=notes)


def suite_cid_identity(params: ModelParams, n: int, base_seed: int = 0,
                       report_only: bool = False,
                       thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """Λ_{n+1} = Λ_n(1 − (R_{n+1}−β)/(c+Σ_{i≤n+1}R_i)) 的最大相对残差"""
    th = thresholds or Thresholds()
    validate_params(params)
    exact = params.beta == 0.0 or _is_unit_weight(params)
    if not exact and not report_only:
        raise InapplicableSuiteError("c.i.d. identity is exact only for beta = 0 or unit weights")
    trajectory = run_trajectory(params, n, base_seed, 0,
                                RecordPlan(geometric=False, counts_only=True, audit=True))
    residuals = trajectory.audit.cid_residuals(params)
    statistics = {
        "max_relative_residual": float(residuals.max()),
        "median_relative_residual": float(np.median(residuals)),
        "exact_case": exact,
    }
    if exact:
        verdict = _verdict(statistics["max_relative_residual"] <= th.cid_tol)
        notes = []
    else:
        verdict = Verdict.REPORT_ONLY
        notes = ["identity is not expected to hold outside beta = 0 or unit weights"]
    return SuiteReport("cid_identity", params.to_dict(), n, 1, statistics, th.to_dict(),
                       verdict, base_seed, mode="counts", notes=notes)


def suite_finite_buffet(params: ModelParams, n: int, reps: int, base_seed: int = 0,
                        parallelism: int = 1,
                        thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """β < 0 时菜品总数有限：L_n = L_{n/2} 的比例与 E(e^{L_n}) 的稳定"""
    th = thresholds or Thresholds()
    validate_params(params)
    if not params.beta < 0:
        raise InapplicableSuiteError("finite buffet requires beta < 0")
    if n < 2:
        raise InapplicableSuiteError("finite buffet needs n >= 2")
    half = n // 2
    plan = RecordPlan(extra=(half, n), geometric=False, counts_only=True)
    trajectories = replicate_trajectories(params, n, plan, reps, base_seed, parallelism)
    late = np.array([t.row_at(n).L for t in trajectories], dtype=float)
    early = np.array([t.row_at(half).L for t in trajectories], dtype=float)
    fraction = float(np.mean(late == early))
    exp_ratio = float(math.exp(logsumexp(late) - logsumexp(early)))
    statistics = {
        "fraction_stable": fraction,
        "mean_L_late": float(late.mean()),
        "mean_L_early": float(early.mean()),
        "mean_exp_L_ratio": exp_ratio,
        "log_mean_exp_L": float(logsumexp(late) - math.log(reps)),
        "exp_ratio_within_band": th.exp_ratio_lo <= exp_ratio <= th.exp_ratio_hi,
    }
    return SuiteReport("finite_buffet", params.to_dict(), [half, n], reps, statistics,
                       th.to_dict(), _verdict(fraction >= th.finite_fraction), base_seed,
                       mode="counts")


def suite_beta_hat(params: ModelParams, horizons: Sequence[int], reps: int,
                   base_seed: int = 0, parallelism: int = 1,
                   thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """β̂_n = log L_n / log n 的强相合性"""
    th = thresholds or Thresholds()
    applicability = validate_params(params)
    if not applicability.thm43_ok:
        raise InapplicableSuiteError("beta_hat consistency requires 0 <= beta < 1")
    points = _horizons(horizons)
    plan = RecordPlan(extra=tuple(points), geometric=False, counts_only=True)
    trajectories = replicate_trajectories(params, points[-1], plan, reps, base_seed, parallelism)
    per_horizon = []
    for h in points:
        estimates = [beta_hat(t.row_at(h).L, h) for t in trajectories]
        defined = np.array([b for b in estimates if b is not None])
        mean = float(defined.mean()) if defined.size else math.nan
        per_horizon.append({"n": h, "mean": mean, "undefined": len(estimates) - int(defined.size),
                            "abs_deviation": abs(mean - params.beta)})
    deviations = [row["abs_deviation"] for row in per_horizon]
    decreasing = all(b < a for a, b in zip(deviations, deviations[1:]))
    final_ok = deviations[-1] <= th.beta_hat_tol
    statistics = {"horizons": per_horizon, "decreasing": decreasing,
                  "final_within_tolerance": final_ok}
    return SuiteReport("beta_hat", params.to_dict(), points, reps, statistics, th.to_dict(),
                       _verdict(decreasing and final_ok), base_seed, mode="counts")


def log_gamma_recurrence_residual(x_min: float = 0.5, x_max: float = 1e4,
                                  points: int = 2000) -> float:
    """max |lnΓ(x+1) − lnΓ(x) − ln x| / max(1, |lnΓ(x+1)|)"""
    worst = 0.0
    for x in np.geomspace(x_min, x_max, points):
        x = float(x)
        upper = log_gamma(x + 1.0)
        residual = abs(upper - log_gamma(x) - math.log(x)) / max(1.0, abs(upper))
        worst = max(worst, residual)
    return worst


def suite_invariants(params: ModelParams, n: int, reps: int, base_seed: int = 0,
                     parallelism: int = 1,
                     thresholds: Optional[Thresholds] = None) -> SuiteReport:
    """逐轨迹不变量：Λ 严格递减且 ≤ D/n^{1−β}、纳入概率在 (0,1) 内、数值函数自洽"""
    th = thresholds or Thresholds()
    validate_params(params)
    beta = params.beta
    bound_constant = lambda_bound_constant(params)
    x_min = params.c + params.weights.lower_bound
    sup_short = x_h_grid_sup(beta, x_min, 1e6)
    sup_long = x_h_grid_sup(beta, x_min, 1e8)
    recurrence = log_gamma_recurrence_residual()

    plan = RecordPlan(geometric=False, audit=True)
    trajectories = replicate_trajectories(params, n, plan, reps, base_seed, parallelism)
    audits = [t.audit for t in trajectories]
    decreasing = all(a.lambda_strictly_decreasing() for a in audits)
    bound_ratio = max(a.max_bound_ratio(bound_constant, beta) for a in audits)
    prob_min = min(a.prob_min for a in audits)
    prob_max = max(a.prob_max for a in audits)
    last_big = np.array([a.last_big_N_index for a in audits], dtype=float)
    statistics = {
        "lambda_strictly_decreasing": decreasing,
        "bound_constant_D": bound_constant,
        "max_lambda_over_bound": bound_ratio,
        "max_scaled_increment": max(a.max_increment_scaled(beta) for a in audits),
        "inclusion_probability_min": prob_min,
        "inclusion_probability_max": prob_max,
        "log_gamma_recurrence_residual": recurrence,
        "x_h_sup_to_1e6": sup_short,
        "x_h_sup_to_1e8": sup_long,
        "last_large_N_index_median": float(np.median(last_big)),
        "last_large_N_index_p90": float(np.percentile(last_big, 90)),
    }
    sup_stable = math.isfinite(sup_long) and abs(sup_long - sup_short) <= 1e-2 * max(1.0, sup_long)
    probs_ok = (not math.isfinite(prob_min)) or (0.0 < prob_min and prob_max < 1.0)
    ok = (decreasing and bound_ratio <= 1.0 + th.bound_rel_tol and probs_ok
          and recurrence <= 1e-11 and sup_stable)
    return SuiteReport("invariants", params.to_dict(), n, reps, statistics, th.to_dict(),
                       _verdict(ok), base_seed)
