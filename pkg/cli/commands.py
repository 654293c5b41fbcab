"""
命令模块 - simulate / estimate / verify / oracle
"""

import json
from typing import Any, Dict, List

from colorama import Fore, Style

from estimators.estimates import estimate_from_row
from model.buffet import run_trajectory
from montecarlo.acceptance import CATALOGUE, run_case
from montecarlo.report import SuiteReport, Verdict
from montecarlo.suites import suite_poisson_oracle
from stats.trajectory import RecordPlan
from utils.config import Config
from utils.errors import ConfigError, InapplicableSuiteError
from utils.logger import Logger
from .parser import RunConfig

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INAPPLICABLE = 3

_COLOURS = {
    Verdict.PASS: Fore.GREEN,
    Verdict.FAIL: Fore.RED,
    Verdict.UNDERPOWERED: Fore.YELLOW,
    Verdict.REPORT_ONLY: Fore.YELLOW,
}


def _write_json(path: str, document: Dict[str, Any]):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=2)
        handle.write("\n")


class Commands:
    """命令处理器"""

    def __init__(self, config: RunConfig, settings: Config):
        """初始化命令处理器"""
        self.config = config
        self.settings = settings
        self.thresholds = config.resolve_thresholds(settings.thresholds)
        self.logger = Logger()

    @property
    def parallelism(self) -> int:
        return self.config.parallelism or self.settings.parallelism

    def simulate(self) -> int:
        """模拟一条轨迹，输出 CSV 与 JSON"""
        cfg = self.config
        plan = RecordPlan(gamma=cfg.gamma, extra=tuple(cfg.checkpoints))
        trajectory = run_trajectory(cfg.model_params(), cfg.n, cfg.seed, 0, plan,
                                    capacity_limit=self.settings.dish_capacity())
        if cfg.out:
            trajectory.write_csv(f"{cfg.out}.csv")
            trajectory.write_json(f"{cfg.out}.json", cfg.provenance())
            print(f"{Fore.GREEN}轨迹已写入 {cfg.out}.csv / {cfg.out}.json{Style.RESET_ALL}")
        else:
            print(trajectory.to_csv_text(), end="")
        final = trajectory.final
        self.logger.info(f"simulate 完成: n={final.n}, L={final.L}, Kbar={final.Kbar}")
        return EXIT_PASS

    def estimate(self) -> int:
        """在检查点上计算估计量，打印对齐表格"""
        cfg = self.config
        params = cfg.model_params()
        extra = tuple(cfg.checkpoints) or tuple(10 ** k for k in range(1, 10) if 10 ** k < cfg.n)
        plan = RecordPlan(extra=extra, geometric=False)
        trajectory = run_trajectory(params, cfg.n, cfg.seed, 0, plan,
                                    capacity_limit=self.settings.dish_capacity())
        reports = [estimate_from_row(row, params, cfg.level) for row in trajectory.rows if row.n >= 2]
        if not reports:
            raise ConfigError("estimate 需要 n >= 2")

        print(f"{Fore.CYAN}{'n':>10} {'L_n':>8} {'Kbar':>12} {'beta_hat':>10} "
              f"{'lambda_hat':>12} {'sigma2':>12} {'tau2':>12} {'CI':>27}{Style.RESET_ALL}")
        for r in reports:
            beta_text = f"{r.beta_hat:.5f}" if r.beta_hat is not None else "-"
            lam_text = f"{r.lambda_hat:.5f}" if r.lambda_hat is not None else "-"
            print(f"{r.n:>10} {r.L_n:>8} {r.kbar:>12.6f} {beta_text:>10} {lam_text:>12} "
                  f"{r.sigma_hat_sq:>12.6f} {r.tau_hat_sq:>12.6f} "
                  f"[{r.ci_lo:>11.6f}, {r.ci_hi:>11.6f}]")
        if cfg.out:
            _write_json(f"{cfg.out}.json", {
                "config": cfg.provenance(),
                "params": params.to_dict(),
                "estimates": [r.to_dict() for r in reports],
            })
        return EXIT_PASS

    def verify(self) -> int:
        """运行选定的验收用例；全部通过时退出码为 0"""
        cfg = self.config
        names = cfg.suites or list(CATALOGUE)
        unknown = [name for name in names if name not in CATALOGUE]
        if unknown:
            raise ConfigError(f"未知套件: {', '.join(unknown)}；可选: {', '.join(CATALOGUE)}")

        overrides = self._case_overrides()
        reports: List[SuiteReport] = []
        inapplicable: List[str] = []
        for name in names:
            case = CATALOGUE[name]
            params = case.params.replace(**overrides["model"]) if overrides["model"] else None
            try:
                report = run_case(case, cfg.seed, self.parallelism, self.thresholds,
                                  params=params, n=overrides.get("n"), reps=overrides.get("reps"),
                                  horizons=overrides.get("horizons"),
                                  proxy_factor=overrides.get("proxy_factor"),
                                  level=overrides.get("level"))
            except InapplicableSuiteError as e:
                inapplicable.append(f"{name}: {e}")
                print(f"{Fore.YELLOW}[INAPPLICABLE] {name}: {e}{Style.RESET_ALL}")
                continue
            reports.append(report)
            self._print_report(report)

        if cfg.out:
            _write_json(f"{cfg.out}.json", {
                "config": cfg.provenance(),
                "reports": [r.to_dict() for r in reports],
                "inapplicable": inapplicable,
            })
        if inapplicable:
            return EXIT_INAPPLICABLE
        ok = all(r.verdict in (Verdict.PASS, Verdict.REPORT_ONLY) for r in reports)
        return EXIT_PASS if ok else EXIT_FAIL

    def oracle(self) -> int:
        """精确泊松预言检验"""
        cfg = self.config
        report = suite_poisson_oracle(cfg.model_params(), cfg.n, cfg.reps, cfg.seed,
                                      self.parallelism, self.thresholds)
        self._print_report(report)
        if cfg.out:
            _write_json(f"{cfg.out}.json", {"config": cfg.provenance(), "reports": [report.to_dict()]})
        return EXIT_PASS if report.passed else EXIT_FAIL

    def _case_overrides(self) -> Dict[str, Any]:
        cfg = self.config
        explicit = cfg.model_fields_set
        model = {}
        explicit_model = cfg.explicit_model_fields()
        if explicit_model:
            params = cfg.model_params()
            model = {name: getattr(params, name) for name in explicit_model}
        overrides: Dict[str, Any] = {"model": model}
        for name in ("n", "reps", "proxy_factor", "level"):
            if name in explicit:
                overrides[name] = getattr(cfg, name)
        if "checkpoints" in explicit and cfg.checkpoints:
            overrides["horizons"] = tuple(cfg.checkpoints)
        return overrides

    def _print_report(self, report: SuiteReport):
        colour = _COLOURS[report.verdict]
        print(f"{colour}{report.summary_text()}{Style.RESET_ALL}")
        self.logger.log_suite_event(report.case or report.suite, report.verdict.value)
