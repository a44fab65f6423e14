"""
运行配置与结果包

RunConfig 的文本形式是逐行 `key = value`；ResultBundle 汇总一次命令的
各项检查结果，并把表格写成 CSV、把报告写成 JSON。
"""

import csv
import hashlib
import json
import os
import time
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import config
from errors import ConfigError


def _parse_ints(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def _parse_optional_int(text: str) -> Optional[int]:
    text = text.strip()
    return int(text) if text else None


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"无法解析布尔值 {text!r}")


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(x) for x in value)
    return str(value)


@dataclass
class RunConfig:
    """一次运行的全部参数"""
    p: int = config.DEFAULT_P
    e: int = config.DEFAULT_E
    modulus: Tuple[int, ...] = ()
    command: str = ""
    subcommand: str = ""
    s: Tuple[int, ...] = ()
    d_lo: Optional[int] = None
    d_hi: Optional[int] = None
    maxdeg: Optional[int] = None
    n_max: int = config.DEFAULT_N_MAX
    s_max: int = config.DEFAULT_S_MAX
    threads: int = config.DEFAULT_THREADS
    cache_dir: str = config.CACHE_DIRECTORY
    out_dir: str = config.OUTPUT_DIRECTORY
    force: bool = False

    _PARSERS = {
        "p": int, "e": int, "modulus": _parse_ints, "command": str.strip,
        "subcommand": str.strip, "s": _parse_ints, "d_lo": _parse_optional_int,
        "d_hi": _parse_optional_int, "maxdeg": _parse_optional_int, "n_max": int,
        "s_max": int, "threads": int, "cache_dir": str.strip, "out_dir": str.strip,
        "force": _parse_bool,
    }

    @property
    def q(self) -> int:
        return self.p ** self.e

    def resolved_maxdeg(self) -> int:
        if self.maxdeg is not None:
            return self.maxdeg
        return config.DEFAULT_MAXDEG.get(self.q, 3)

    def to_text(self) -> str:
        return "\n".join(f"{f.name} = {_format(getattr(self, f.name))}" for f in fields(self)) + "\n"

    @classmethod
    def from_text(cls, text: str, base: Optional["RunConfig"] = None) -> "RunConfig":
        """
        解析 `key = value` 文本；未出现的键取 base（或默认值）

        Raises:
            ConfigError: 未知的键或无法解析的值
        """
        values = asdict(base) if base is not None else {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, raw = line.partition("=")
            key = key.strip()
            if not sep:
                raise ConfigError(f"第 {lineno} 行缺少 '='：{line!r}")
            parser = cls._PARSERS.get(key)
            if parser is None:
                raise ConfigError(f"未知配置项 {key!r}")
            try:
                values[key] = parser(raw)
            except ValueError as exc:
                raise ConfigError(f"配置项 {key} 的值 {raw.strip()!r} 无法解析: {exc}") from None
        return cls(**values)

    @classmethod
    def load(cls, path: str, base: Optional["RunConfig"] = None) -> "RunConfig":
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_text(f.read(), base)

    def content_hash(self) -> str:
        """不含线程数与目录的配置哈希：这些参数不影响结果"""
        skip = {"threads", "cache_dir", "out_dir"}
        text = "\n".join(f"{f.name}={_format(getattr(self, f.name))}"
                         for f in fields(self) if f.name not in skip)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


class Outcome(Enum):
    PASS = "pass"
    FAIL = "fail"
    FINDING = "finding"


# 退出码
EXIT_OK = 0
EXIT_HARD = 1
EXIT_SOFT = 2
EXIT_USAGE = 3


@dataclass
class CheckOutcome:
    name: str
    coords: Dict[str, Any] = field(default_factory=dict)
    outcome: str = Outcome.PASS.value
    detail: str = ""


@dataclass
class ResultBundle:
    """一次命令的结果包；除 timing 外，相同配置得到逐字节相同的内容"""
    command: str
    config_hash: str
    checks: List[CheckOutcome] = field(default_factory=list)
    artifacts: Dict[str, str] = field(default_factory=dict)
    incomplete: bool = False
    notes: List[str] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self._start = time.perf_counter()

    def mark_incomplete(self, note: str):
        self.incomplete = True
        self.notes.append(note)

    def add(self, name: str, passed: bool, coords: Optional[Dict] = None,
            detail: str = "", finding: bool = False) -> CheckOutcome:
        if passed:
            outcome = Outcome.PASS
        else:
            outcome = Outcome.FINDING if finding else Outcome.FAIL
        check = CheckOutcome(name=name, coords=dict(coords or {}),
                             outcome=outcome.value, detail=detail)
        self.checks.append(check)
        return check

    @property
    def failures(self) -> List[CheckOutcome]:
        return [c for c in self.checks if c.outcome == Outcome.FAIL.value]

    @property
    def findings(self) -> List[CheckOutcome]:
        return [c for c in self.checks if c.outcome == Outcome.FINDING.value]

    @property
    def exit_code(self) -> int:
        if self.failures:
            return EXIT_HARD
        if self.incomplete:
            return EXIT_USAGE
        if self.findings:
            return EXIT_SOFT
        return EXIT_OK

    def to_dict(self, with_timing: bool = True) -> Dict:
        data = {
            "command": self.command,
            "config_hash": self.config_hash,
            "incomplete": self.incomplete,
            "notes": list(self.notes),
            "summary": {
                "checks": len(self.checks),
                "failures": len(self.failures),
                "findings": len(self.findings),
                "exit_code": self.exit_code,
            },
            "checks": [asdict(c) for c in self.checks],
            "artifacts": dict(sorted(self.artifacts.items())),
        }
        if with_timing:
            data["timing"] = self.timing
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "ResultBundle":
        bundle = cls(command=data["command"], config_hash=data["config_hash"],
                     incomplete=data.get("incomplete", False),
                     notes=list(data.get("notes", [])))
        bundle.checks = [CheckOutcome(**c) for c in data.get("checks", [])]
        bundle.artifacts = dict(data.get("artifacts", {}))
        bundle.timing = dict(data.get("timing", {}))
        return bundle

    def finish(self):
        self.timing["seconds"] = round(time.perf_counter() - self._start, 3)


def _ensure_dir(directory: str):
    if directory and not os.path.exists(directory):
        os.makedirs(directory)


def write_table(bundle: ResultBundle, out_dir: str, name: str,
                header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """CSV 表格，列顺序固定"""
    _ensure_dir(out_dir)
    path = os.path.join(out_dir, f"{name}.csv")
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else v for v in row])
    bundle.artifacts[os.path.basename(path)] = path
    return path


def write_report(bundle: ResultBundle, out_dir: str, name: str, data: Dict) -> str:
    _ensure_dir(out_dir)
    path = os.path.join(out_dir, f"{name}.json")
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
    bundle.artifacts[os.path.basename(path)] = path
    return path


def save_bundle(bundle: ResultBundle, out_dir: str) -> str:
    bundle.finish()
    _ensure_dir(out_dir)
    name = bundle.command.replace(" ", "_")
    path = os.path.join(out_dir, f"bundle_{name}.json")
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(bundle.to_dict(), f, ensure_ascii=False, indent=2)
    return path


def load_bundle(path: str) -> ResultBundle:
    with open(path, 'r', encoding='utf-8') as f:
        return ResultBundle.from_dict(json.load(f))
