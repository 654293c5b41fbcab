"""
配置解析器模块 - 配置文件 (key = value) 与命令行参数合并为 RunConfig
"""

import argparse
import json
import re
from dataclasses import fields, replace
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from model.params import IntervalSet, ModelParams, WeightSpec, validate_params
from utils.config import Thresholds
from utils.errors import ConfigError

COMMANDS = ("simulate", "estimate", "verify", "oracle")

# 决定结果的字段；并行度、输出路径与日志设置不进入产物
PROVENANCE_FIELDS = (
    "command", "alpha", "beta", "c", "weights", "subset", "n", "reps", "seed",
    "proxy_factor", "checkpoints", "gamma", "level", "suites", "thresholds",
)
MODEL_FIELDS = ("alpha", "beta", "c", "weights", "subset")
# 配置文件中 threshold_<name> = value 覆盖单个判定阈值
THRESHOLD_PREFIX = "threshold_"
THRESHOLD_NAMES = tuple(item.name for item in fields(Thresholds))


def threshold_pairs(items: Sequence[str]) -> Dict[str, str]:
    """把 name=value 项（可逗号分隔）解析为字典"""
    pairs: Dict[str, str] = {}
    for item in items:
        for part in item.split(","):
            if not part.strip():
                continue
            name, sep, value = part.partition("=")
            if not sep:
                raise ValueError(f"threshold must be name=value: {part.strip()!r}")
            pairs[name.strip()] = value.strip()
    return pairs


class RunConfig(BaseModel):
    """一次运行的完整配置"""

    model_config = ConfigDict(extra="forbid")

    command: Literal["simulate", "estimate", "verify", "oracle"]
    alpha: float = 1.0
    beta: float = 0.5
    c: float = 1.0
    weights: str = "const:1"
    subset: Optional[str] = None
    n: int = Field(default=10000, ge=1)
    reps: int = Field(default=200, ge=1)
    seed: int = Field(default=42, ge=0, lt=2 ** 64)
    parallelism: Optional[int] = Field(default=None, ge=1)
    proxy_factor: int = Field(default=10, ge=2)
    checkpoints: List[int] = Field(default_factory=list)
    gamma: float = Field(default=1.2, gt=1.0)
    level: float = Field(default=0.95, gt=0.0, lt=1.0)
    out: Optional[str] = None
    suites: List[str] = Field(default_factory=list)
    log_level: Optional[str] = None
    log_dir: Optional[str] = None
    thresholds: Dict[str, float] = Field(default_factory=dict)

    @field_validator("checkpoints", "suites", mode="before")
    @classmethod
    def _split_list(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("thresholds", mode="before")
    @classmethod
    def _split_thresholds(cls, value: Any) -> Any:
        if isinstance(value, str):
            return threshold_pairs([value])
        if isinstance(value, list):
            return threshold_pairs(value)
        return value

    @field_validator("thresholds")
    @classmethod
    def _known_thresholds(cls, value: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(value) - set(THRESHOLD_NAMES))
        if unknown:
            raise ValueError(f"unknown thresholds: {', '.join(unknown)}")
        return value

    def model_params(self) -> ModelParams:
        return ModelParams(
            alpha=self.alpha,
            beta=self.beta,
            c=self.c,
            weights=WeightSpec.parse(self.weights),
            subset=IntervalSet.parse(self.subset) if self.subset is not None else None,
        )

    def explicit_model_fields(self) -> Dict[str, Any]:
        """显式给出（文件或命令行）的模型字段"""
        return {name: getattr(self, name) for name in MODEL_FIELDS if name in self.model_fields_set}

    def provenance(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        return {name: data[name] for name in PROVENANCE_FIELDS}

    def resolve_thresholds(self, base: Thresholds) -> Thresholds:
        """在进程级阈值上叠加本次运行的覆盖值"""
        overrides = {name: type(getattr(base, name))(value) for name, value in self.thresholds.items()}
        return replace(base, **overrides)


class ConfigParser:
    """配置解析器"""

    def __init__(self):
        """初始化配置解析器"""
        # key = value 行
        self.line_pattern = re.compile(r'^\s*([A-Za-z_][\w-]*)\s*=\s*(.*?)\s*$')
        # 注释
        self.comment_pattern = re.compile(r'\s+#.*$')

    def parse_file(self, path: str) -> Dict[str, Any]:
        """读取配置文件；.json 产物取其中嵌入的 config"""
        try:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as e:
            raise ConfigError(f"无法读取配置文件 {path}: {e}")
        if path.endswith(".json"):
            return self._parse_artifact(path, text)
        return self.parse_text(text, source=path)

    def _parse_artifact(self, path: str, text: str) -> Dict[str, Any]:
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} 不是合法的 JSON: {e}")
        config = document.get("config") if isinstance(document, dict) else None
        if not isinstance(config, dict):
            raise ConfigError(f"{path} 中没有嵌入的 config")
        return {k: v for k, v in config.items() if v is not None and v != [] and v != {}}

    def parse_text(self, text: str, source: str = "<text>") -> Dict[str, Any]:
        """解析扁平 key = value 文本"""
        values: Dict[str, Any] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = self.comment_pattern.sub("", raw).strip()
            if not line or line.startswith("#"):
                continue
            match = self.line_pattern.match(line)
            if not match:
                raise ConfigError(f"{source}:{number}: 无法解析的行: {raw!r}")
            key, value = match.groups()
            key = key.replace("-", "_")
            if key == "suite":
                key = "suites"
            values[key] = value.strip('"\'')
        return values


def build_arg_parser() -> argparse.ArgumentParser:
    """命令行参数；缺省值不写入，以便区分显式给出的字段"""
    parser = argparse.ArgumentParser(
        prog="ibp",
        description="weighted Indian buffet process simulator and verification laboratory",
        argument_default=argparse.SUPPRESS,
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", dest="config_file", help="key = value file or JSON artifact")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--c", type=float)
    parser.add_argument("--weights", help="const:r | unif:u,b | twopoint:v1,v2,p")
    parser.add_argument("--subset", help="comma-separated intervals lo:hi")
    parser.add_argument("--n", type=int)
    parser.add_argument("--reps", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--parallelism", type=int)
    parser.add_argument("--proxy-factor", dest="proxy_factor", type=int)
    parser.add_argument("--checkpoints", help="comma-separated customer counts")
    parser.add_argument("--gamma", type=float, help="geometric checkpoint ratio")
    parser.add_argument("--level", type=float)
    parser.add_argument("--out", help="output path prefix")
    parser.add_argument("--suite", dest="suites", action="append")
    parser.add_argument("--threshold", dest="thresholds", action="append",
                        help="override a verdict threshold, name=value")
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--log-dir", dest="log_dir")
    return parser


def _merge_thresholds(values: Dict[str, Any], flags: Sequence[str]) -> Dict[str, Any]:
    """文件中的 thresholds 与 threshold_<name> 键，再叠加命令行 --threshold"""
    merged: Dict[str, Any] = {}
    embedded = values.pop("thresholds", None)
    if isinstance(embedded, dict):
        merged.update(embedded)
    elif embedded:
        merged.update(threshold_pairs([embedded] if isinstance(embedded, str) else embedded))
    for key in [k for k in values if k.startswith(THRESHOLD_PREFIX)]:
        merged[key[len(THRESHOLD_PREFIX):]] = values.pop(key)
    merged.update(threshold_pairs(flags))
    return merged


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """文件值被命令行覆盖；模型参数在任何工作之前校验"""
    namespace = vars(build_arg_parser().parse_args(argv))
    config_file = namespace.pop("config_file", None)
    values: Dict[str, Any] = {}
    if config_file:
        values.update(ConfigParser().parse_file(config_file))
    try:
        thresholds = _merge_thresholds(values, namespace.pop("thresholds", []))
    except ValueError as e:
        raise ConfigError(f"配置无效: thresholds: {e}")
    values.update(namespace)
    if thresholds:
        values["thresholds"] = thresholds
    try:
        config = RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"配置无效: {problems}")
    validate_params(config.model_params())
    return config
