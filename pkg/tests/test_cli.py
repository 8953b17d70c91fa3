from __future__ import annotations

import json
import subprocess
import sys

from treeplan.bench.report import TABLE_COLUMNS
from treeplan.cli import build_parser, config_from_args, main


def test_run_prints_table_and_draws_figures(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["run", "--dataset", "ml_pipeline", "--seeds", "1,2", "--method", "search", "--method", "cot:1",
                 "--budget", "15", "--sample-size", "4", "--out", str(out)])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t") == list(TABLE_COLUMNS)
    assert sorted(line.split("\t")[0] for line in lines[1:]) == ["cot_1", "search"]
    assert (out / "figures" / "accuracy.png").stat().st_size > 0
    assert (out / "figures" / "efficiency.png").stat().st_size > 0
    assert json.loads((out / "metrics.json").read_text())["config"]["search"] == {"budget": 15}


def test_report_redraws(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "--sample-size", "3", "--seeds", "5", "--budget", "10", "--no-figures", "--out", str(out)]) == 0
    assert not (out / "figures").exists()
    capsys.readouterr()
    assert main(["report", str(out), "--sep", ","]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == ",".join(TABLE_COLUMNS)
    assert (out / "figures" / "accuracy.png").is_file()
    assert "figure:" in captured.err


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"dataset": "trap_suite", "search": {"budget": 7, "alpha": 0.2}, "workers": 2}))
    args = build_parser().parse_args(["run", "--config", str(path), "--alpha", "0.9", "--c-explore", "0.5"])
    cfg = config_from_args(args)
    assert cfg.dataset == "trap_suite" and cfg.workers == 2
    assert cfg.search == {"budget": 7, "alpha": 0.9, "exploration": 0.5}


def test_errors_exit_with_code_two(tmp_path, capsys):
    assert main(["run", "--alpha", "3", "--out", str(tmp_path)]) == 2
    assert "treeplan: error:" in capsys.readouterr().err
    assert main(["report", str(tmp_path / "missing")]) == 2
    assert main(["run", "--method", "lats", "--out", str(tmp_path)]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "treeplan", "run", "--sample-size", "2", "--seeds", "3",
                           "--budget", "5", "--no-figures", "--out", str(tmp_path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("method\t")
