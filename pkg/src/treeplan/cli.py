"""Command line entry point: ``treeplan run`` and ``treeplan report``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from .bench.experiment import ConfigFileError, ExperimentConfig, run_experiment
from .bench.report import load_rows, render_figures, write_table
from .tree import ConfigError


def _seeds(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treeplan", description="Tree-search tool planning experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and write records, metrics and figures")
    run.add_argument("--config", help="JSON experiment config; flags below override its fields")
    run.add_argument("--dataset", help="shipped dataset name or path to a dataset JSON file")
    run.add_argument("--seeds", type=_seeds, help="comma-separated seeds")
    run.add_argument("--method", action="append", dest="methods",
                     help="search | cot:K | mcts:N | ablation:<flag>; repeatable")
    run.add_argument("--backend", choices=("scripted", "http"))
    run.add_argument("--budget", type=int)
    run.add_argument("--alpha", type=float)
    run.add_argument("--c-explore", type=float, dest="exploration")
    run.add_argument("--max-depth", type=int)
    run.add_argument("--sample-size", type=int)
    run.add_argument("--residual", action="store_true", default=None,
                     help="screen with CoT(k=1) first and evaluate only its failures")
    run.add_argument("--out")
    run.add_argument("--workers", type=int)
    run.add_argument("--trace", action="store_true", default=None)
    run.add_argument("--no-figures", action="store_true")

    report = sub.add_parser("report", help="print the metrics table for a run directory and redraw its figures")
    report.add_argument("run_dir")
    report.add_argument("--sep", default="\t", help="column separator (default: tab)")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    for name in ("dataset", "seeds", "methods", "sample_size", "residual", "out", "workers", "trace"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.backend is not None and args.backend != cfg.backend.get("kind", "scripted"):
        cfg.backend = {"kind": args.backend}
    search = dict(cfg.search)
    for name in ("budget", "alpha", "exploration", "max_depth"):
        value = getattr(args, name)
        if value is not None:
            search[name] = value
    cfg.search = search
    if args.no_figures:
        cfg.figures = False
    cfg.validate()
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = config_from_args(args)
            result = run_experiment(cfg)
            write_table(result.rows, sys.stdout)
            print(f"wrote {result.out_dir}/records.jsonl and {result.out_dir}/metrics.json", file=sys.stderr)
        else:
            rows = load_rows(args.run_dir)
            write_table(rows, sys.stdout, sep=args.sep)
            for path in render_figures(rows, f"{args.run_dir}/figures"):
                print(f"figure: {path}", file=sys.stderr)
    except (ConfigFileError, ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"treeplan: error: {exc}", file=sys.stderr)
        return 2
    return 0
