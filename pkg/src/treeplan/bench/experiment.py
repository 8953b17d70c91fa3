"""Multi-seed experiment runner: sample, optionally screen with CoT(k=1) to
build the residual set, run every method, write records and metrics."""

from __future__ import annotations

import csv
import itertools
import json
import logging
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..backends import HttpBackend, HttpBackendConfig, OracleBackend, OracleConfig
from ..domain import Task
from ..engine import PlanResult, ablation_config, run_ablation, run_search, run_standard_mcts
from ..protocol import AgentBackend, AgentRole, BackendError, UsageCounters
from ..tree import ConfigError, SearchConfig
from .cot import run_cot
from .dataset import load_dataset, sample_split
from .evaluate import MatchPolicy, evaluate_plan
from .metrics import RunRecord, build_residual, compute_metrics

log = logging.getLogger(__name__)

DEFAULT_SEEDS = (42, 101, 1234, 2024, 12345)
SEARCH_KEYS = ("budget", "alpha", "exploration", "max_depth", "expansion_width", "r_terminal")


class ConfigFileError(ValueError):
    pass


@dataclass(frozen=True)
class Method:
    kind: str  # search | cot | mcts | ablation
    arg: str | int | None = None

    @classmethod
    def parse(cls, text: str) -> Method:
        kind, _, arg = text.strip().partition(":")
        if kind == "search" and not arg:
            return cls("search")
        if kind in ("cot", "mcts"):
            try:
                n = int(arg)
            except ValueError:
                raise ConfigError(f"method {text!r}: expected {kind}:<int>") from None
            if n < 1:
                raise ConfigError(f"method {text!r}: count must be >= 1")
            return cls(kind, n)
        if kind == "ablation" and arg:
            ablation_config(arg)  # validates the name
            return cls(kind, arg)
        raise ConfigError(f"unknown method {text!r}")

    @property
    def name(self) -> str:
        return self.kind if self.arg is None else f"{self.kind}_{self.arg}"

    @property
    def searches(self) -> bool:
        return self.kind != "cot"


@dataclass
class ExperimentConfig:
    dataset: str = "daily_life"
    methods: list[str] = field(default_factory=lambda: ["search"])
    seeds: list[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    sample_size: int | None = None
    residual: bool = False
    backend: dict[str, Any] = field(default_factory=lambda: {"kind": "scripted"})
    search: dict[str, Any] = field(default_factory=dict)
    sweep: dict[str, list] = field(default_factory=dict)
    policy: str = "multiset"
    workers: int = 1
    trace: bool = False
    figures: bool = True
    out: str = "runs/latest"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigFileError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigFileError(f"{path}: cannot read config: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigFileError(f"{path}: top level must be a JSON object")
        try:
            return cls.from_dict(data)
        except (ConfigError, ValueError, TypeError) as exc:
            raise ConfigFileError(f"{path}: {exc}") from None

    def validate(self) -> None:
        for m in self.methods:
            Method.parse(m)
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        MatchPolicy(self.policy)
        for key in self.sweep:
            if key not in SEARCH_KEYS:
                raise ConfigError(f"cannot sweep over {key!r}; choose from {SEARCH_KEYS}")
        for combo in self.combos():
            self.search_config(combo)
        if self.backend.get("kind", "scripted") not in ("scripted", "http"):
            raise ConfigError(f"unknown backend kind {self.backend.get('kind')!r}")

    def combos(self) -> list[dict[str, Any]]:
        if not self.sweep:
            return [{}]
        keys = sorted(self.sweep)
        return [dict(zip(keys, values)) for values in itertools.product(*(self.sweep[k] for k in keys))]

    def search_config(self, combo: dict[str, Any]) -> SearchConfig:
        unknown = set(self.search) - set(SEARCH_KEYS) - {"graph_hints", "uniform_value", "finish_revisit_stored"}
        if unknown:
            raise ConfigError(f"unknown search keys: {sorted(unknown)}")
        return SearchConfig(**{**self.search, **combo})


BackendFactory = Callable[[int], AgentBackend]


def backend_factory(spec: dict[str, Any], tasks: list[Task]) -> tuple[BackendFactory, dict | None]:
    """Return a per-run backend constructor (keyed by seed) and sampling overrides."""
    spec = dict(spec)
    kind = spec.pop("kind", "scripted")
    if kind == "scripted":
        base = OracleConfig(**spec)

        def make(seed: int) -> AgentBackend:
            return OracleBackend(tasks, OracleConfig(**{**base.__dict__, "rng_seed": seed}))

        return make, None
    http_cfg = HttpBackendConfig.from_dict(spec)
    shared = HttpBackend(http_cfg)
    return (lambda seed: shared), http_cfg.sampling


@dataclass
class Job:
    seed: int
    stage: str
    method: Method
    params: dict[str, Any]
    task: Task


def _run_one(job: Job, make_backend: BackendFactory, cfg: ExperimentConfig, sampling, trace_dir: Path | None) -> RunRecord:
    backend = make_backend(job.seed)
    started = time.perf_counter()
    trace_path = None
    if trace_dir is not None and job.method.searches:
        tag = "_".join(f"{k}{v}" for k, v in sorted(job.params.items()))
        trace_path = trace_dir / f"{job.stage}_{job.method.name}{'_' + tag if tag else ''}_s{job.seed}_{job.task.id}.jsonl"
    try:
        result = _dispatch(job, backend, cfg, sampling, trace_path)
    except BackendError as exc:
        log.error("task %s (%s, seed %d): backend failed: %s", job.task.id, job.method.name, job.seed, exc)
        result = PlanResult([], 0, {r: UsageCounters() for r in AgentRole}, diagnostics=list(exc.diagnostics))
    elapsed = time.perf_counter() - started
    ok = evaluate_plan(result.plan, job.task, cfg.policy)
    return RunRecord(
        task_id=job.task.id,
        method=job.method.name,
        predicted_plan=[a.render() for a in result.plan],
        verdict="success" if ok else "failure",
        complexity=job.task.complexity,
        usage=result.total_usage,
        seed=job.seed,
        wall_time=elapsed,
        stage=job.stage,
        params=job.params,
        diagnostics=len(result.diagnostics),
    )


def _dispatch(job: Job, backend, cfg: ExperimentConfig, sampling, trace_path) -> PlanResult:
    m = job.method
    if m.kind == "cot":
        return run_cot(job.task, backend, k=int(m.arg), seed=job.seed)
    search = cfg.search_config(job.params)
    kwargs = {"sampling": sampling, "trace_path": trace_path}
    if m.kind == "mcts":
        config = ablation_config("standard_mcts", search).with_(budget=int(m.arg))
        return run_standard_mcts(job.task, backend, config, job.seed, **kwargs)
    if m.kind == "ablation":
        return run_ablation(job.task, backend, ablation_config(str(m.arg), search), job.seed, **kwargs)
    return run_search(job.task, backend, search, job.seed, **kwargs)


def _method_params(method: Method, combos: list[dict[str, Any]]) -> list[dict[str, Any]]:
    if not method.searches:
        return [{}]
    if method.kind == "mcts":
        # budget is fixed by the method name; alpha plays no part without a critic
        reduced = {json.dumps({k: v for k, v in c.items() if k not in ("budget", "alpha")}, sort_keys=True) for c in combos}
        return [json.loads(r) for r in sorted(reduced)]
    return combos


@dataclass
class ExperimentResult:
    records: list[RunRecord]
    rows: list[dict[str, Any]]
    out_dir: Path


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> ExperimentResult:
    cfg.validate()
    out = Path(out_dir or cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _, tasks = load_dataset(cfg.dataset)
    make_backend, sampling = backend_factory(cfg.backend, tasks)
    methods = [Method.parse(m) for m in cfg.methods]
    combos = cfg.combos()
    trace_dir = out / "traces" if cfg.trace else None

    def run_all(jobs: list[Job]) -> list[RunRecord]:
        if cfg.workers == 1:
            return [_run_one(j, make_backend, cfg, sampling, trace_dir) for j in jobs]
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(lambda j: _run_one(j, make_backend, cfg, sampling, trace_dir), jobs))

    records: list[RunRecord] = []
    for seed in cfg.seeds:
        pool = sample_split(tasks, seed, cfg.sample_size)
        if cfg.residual:
            screen = run_all([Job(seed, "screen", Method("cot", 1), {}, t) for t in pool])
            records.extend(screen)
            pool = build_residual(screen, pool)
            log.info("seed %d: residual set has %d tasks", seed, len(pool))
        jobs = [
            Job(seed, "eval", m, params, t)
            for m in methods
            for params in _method_params(m, combos)
            for t in pool
        ]
        records.extend(run_all(jobs))

    rows = aggregate(records)
    write_outputs(out, cfg, records, rows)
    if cfg.figures:
        from .report import render_figures

        render_figures(rows, out / "figures")
    return ExperimentResult(records, rows, out)


def aggregate(records: list[RunRecord]) -> list[dict[str, Any]]:
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for r in records:
        if r.stage != "eval":
            continue
        key = (r.method, json.dumps(r.params, sort_keys=True))
        groups.setdefault(key, []).append(r)
    rows = []
    for (method, params), group in groups.items():
        rows.append({"method": method, "params": json.loads(params), **compute_metrics(group).to_json()})
    return rows


CSV_COLUMNS = (
    "method", "params", "n_total", "simple_acc", "complex_acc", "overall_acc", "overall_acc_std",
    "mean_tokens", "mean_calls", "token_efficiency", "call_efficiency",
)


def write_outputs(out: Path, cfg: ExperimentConfig, records: list[RunRecord], rows: list[dict[str, Any]]) -> None:
    with (out / "records.jsonl").open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r.to_json(), ensure_ascii=False, sort_keys=True) + "\n")
    with (out / "timings.jsonl").open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({"task_id": r.task_id, "method": r.method, "seed": r.seed,
                                 "stage": r.stage, "params": r.params, "wall_time": r.wall_time}) + "\n")
    summary = {"config": cfg.__dict__, "rows": rows}
    (out / "metrics.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    with (out / "metrics.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([
                row["method"], json.dumps(row["params"], sort_keys=True), row["n_total"],
                *(f"{row[k]:.4f}" for k in ("simple_acc", "complex_acc", "overall_acc")),
                f"{row['seed_std']['overall_acc']:.4f}",
                *(f"{row[k]:.4f}" for k in ("mean_tokens", "mean_calls", "token_efficiency", "call_efficiency")),
            ])
