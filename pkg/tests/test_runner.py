import csv
import json
import os

import pytest

import config
import main
from algebra import field_for_q
from errors import BudgetExceeded, ConfigError
from reports import EXIT_OK, EXIT_USAGE, RunConfig
from runner import _row_task, check_budget, cmd_compute_h, cmd_scan, cmd_verify, pool_map, run


def _cfg(tmp_path, **kwargs):
    return RunConfig(cache_dir=str(tmp_path / "cache"), out_dir=str(tmp_path / "out"), **kwargs)


def test_pool_map_keeps_order():
    items = [-3, 1, -2, 5, -8]
    assert pool_map(abs, items, threads=1, quiet=True) == [3, 1, 2, 5, 8]
    assert pool_map(abs, items, threads=2, quiet=True) == [3, 1, 2, 5, 8]


def test_pool_map_rows_independent_of_threads():
    field = field_for_q(2)
    items = [(field.key, 3, d) for d in (2, 3, 4)]
    assert pool_map(_row_task, items, threads=2, quiet=True) == pool_map(_row_task, items, quiet=True)


def test_check_budget(monkeypatch):
    monkeypatch.setattr(config, "COST_GUARD", 100)
    check_budget(RunConfig(), 100, "小任务")
    with pytest.raises(BudgetExceeded):
        check_budget(RunConfig(), 101, "大任务")
    check_budget(RunConfig(force=True), 10 ** 9, "强制")


def test_verify_closed_form(tmp_path):
    bundle = cmd_verify(_cfg(tmp_path, command="verify", subcommand="closed-form", d_hi=4), quiet=True)
    assert bundle.exit_code == EXIT_OK
    assert len(bundle.checks) == 4
    assert os.path.exists(os.path.join(str(tmp_path / "out"), "bundle_verify_closed-form.json"))


def test_verify_theorem5_small_grid(tmp_path):
    cfg = _cfg(tmp_path, command="verify", subcommand="theorem5", s=(3,))
    bundle = cmd_verify(cfg, quiet=True)
    assert bundle.exit_code == EXIT_OK
    # s′ ∈ {0, 1, 2}，d ∈ [1, 4]
    assert len(bundle.checks) == 12


def test_compute_h_twice(tmp_path):
    cfg = _cfg(tmp_path, command="compute-h", s=(3,))
    first = cmd_compute_h(cfg, quiet=True)
    assert first.exit_code == EXIT_OK
    cache_file = os.path.join(cfg.cache_dir, "H_F2_s3.json")
    mtime = os.path.getmtime(cache_file)
    second = cmd_compute_h(cfg, quiet=True)
    assert second.exit_code == EXIT_OK
    assert os.path.getmtime(cache_file) == mtime
    assert "缓存已存在" in second.checks[0].detail

    table = second.artifacts["compute-h_F2.csv"]
    with open(table, 'r', encoding='utf-8', newline='') as f:
        rows = list(csv.DictReader(f))
    assert rows[0]["s"] == "3"
    assert rows[0]["mu"] == "1"
    assert rows[0]["h_q"] == "1"


def test_compute_h_rejects_bad_s(tmp_path):
    with pytest.raises(ConfigError):
        cmd_compute_h(_cfg(tmp_path, p=3, command="compute-h", s=(4,)), quiet=True)


def test_scan_bc_units(tmp_path):
    cfg = _cfg(tmp_path, command="scan", subcommand="bc-units", maxdeg=3)
    bundle = cmd_scan(cfg, quiet=True)
    assert bundle.exit_code == EXIT_OK
    assert sorted(bundle.artifacts) == ["scan_bc-units_F2.csv", "scan_bc-units_F2.json"]


@pytest.mark.parametrize("subcommand, maxdeg", [("prop1", 2), ("theorem1", 3)])
def test_scan_check_subcommands(tmp_path, subcommand, maxdeg):
    cfg = _cfg(tmp_path, command="scan", subcommand=subcommand, maxdeg=maxdeg)
    bundle = cmd_scan(cfg, quiet=True)
    assert bundle.exit_code == EXIT_OK
    with open(bundle.artifacts[f"scan_{subcommand}_F2.json"], 'r', encoding='utf-8') as f:
        data = json.load(f)
    for report in data["reports"]:
        assert report["summary"]["hard"] == 0
        assert all(set(counts) == {"pass"} for counts in report["summary"]["by_clause"].values())


def test_scan_is_thread_invariant(tmp_path):
    results = []
    for threads in (1, 2):
        cfg = _cfg(tmp_path, command="scan", subcommand="conjecture", maxdeg=2, n_max=4,
                   s_max=1, threads=threads)
        bundle = cmd_scan(cfg, quiet=True)
        with open(bundle.artifacts["scan_conjecture_F2.json"], 'r', encoding='utf-8') as f:
            results.append((bundle.to_dict(with_timing=False), f.read()))
    assert results[0] == results[1]


def test_scan_budget_guard(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "COST_GUARD", 10)
    with pytest.raises(BudgetExceeded):
        cmd_scan(_cfg(tmp_path, command="scan", subcommand="conjecture", maxdeg=3), quiet=True)


def test_unknown_command():
    with pytest.raises(ConfigError):
        run(RunConfig(command="plot"))


def test_cli_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("maxdeg = 2\ns = 3\nthreads = 2\n", encoding="utf-8")
    args = main.build_parser().parse_args(
        ["verify", "nu", "--config", str(path), "--q", "3", "--s", "5"])
    cfg = main.build_config(args)
    assert (cfg.p, cfg.e, cfg.modulus) == (3, 1, ())
    assert cfg.s == (5,)
    assert cfg.maxdeg == 2
    assert cfg.threads == 2
    assert cfg.force is False
    assert (cfg.command, cfg.subcommand) == ("verify", "nu")

    args = main.build_parser().parse_args(["scan", "conjecture", "--q", "4"])
    cfg = main.build_config(args)
    assert (cfg.p, cfg.e, cfg.modulus) == (2, 2, (1, 1, 1))


def test_cli_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main.build_parser().parse_args(["verify", "nonsense"])
    assert exc.value.code == EXIT_USAGE
    args = main.build_parser().parse_args(["scan", "prop1", "--threads", "0"])
    with pytest.raises(ConfigError):
        main.build_config(args)
