import csv
import json

import pytest

from errors import ConfigError
from reports import (EXIT_HARD, EXIT_OK, EXIT_SOFT, EXIT_USAGE, ResultBundle, RunConfig,
                     load_bundle, save_bundle, write_table)


def test_config_text_round_trip():
    cfg = RunConfig(p=3, command="verify", subcommand="theorem5", s=(3, 5), d_lo=2, force=True)
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_config_text_overrides_base():
    base = RunConfig(p=3, s=(5,), threads=4)
    cfg = RunConfig.from_text("# 注释\n\nmaxdeg = 2\ns = 3, 5\n", base)
    assert cfg.p == 3
    assert cfg.threads == 4
    assert cfg.maxdeg == 2
    assert cfg.s == (3, 5)
    assert RunConfig(p=5).resolved_maxdeg() == 3
    assert RunConfig(p=2, e=3).q == 8


@pytest.mark.parametrize("text", ["colour = red", "maxdeg 3", "threads = many", "force = maybe"])
def test_config_rejects_bad_lines(text):
    with pytest.raises(ConfigError):
        RunConfig.from_text(text)


def test_config_hash_ignores_threads_and_directories():
    a = RunConfig(p=3, command="scan", threads=1, out_dir="a")
    b = RunConfig(p=3, command="scan", threads=8, out_dir="b", cache_dir="c")
    assert a.content_hash() == b.content_hash()
    assert a.content_hash() != RunConfig(p=3, command="scan", maxdeg=2).content_hash()


def test_exit_code_precedence():
    bundle = ResultBundle(command="verify", config_hash="x")
    assert bundle.exit_code == EXIT_OK
    bundle.add("lambda-analytic", False, finding=True)
    assert bundle.exit_code == EXIT_SOFT
    bundle.mark_incomplete("预算不足")
    assert bundle.exit_code == EXIT_USAGE
    bundle.add("theorem5", False, {"s": 3})
    assert bundle.exit_code == EXIT_HARD
    assert [c.name for c in bundle.failures] == ["theorem5"]


def test_bundle_files(tmp_path):
    out = str(tmp_path / "out")
    bundle = ResultBundle(command="scan conjecture", config_hash="abc")
    bundle.add("cell", True, {"P": "1,1,1", "n": 3})
    table = write_table(bundle, out, "cells", ["P", "n", "value"], [["1,1,1", 3, None]])
    with open(table, 'r', encoding='utf-8', newline='') as f:
        assert list(csv.reader(f)) == [["P", "n", "value"], ["1,1,1", "3", ""]]

    path = save_bundle(bundle, out)
    assert path.endswith("bundle_scan_conjecture.json")
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    assert data["summary"] == {"checks": 1, "failures": 0, "findings": 0, "exit_code": 0}
    assert "seconds" in data["timing"]
    loaded = load_bundle(path)
    assert loaded.to_dict(with_timing=False) == bundle.to_dict(with_timing=False)
