"""Run records and aggregate accuracy / efficiency metrics."""

from __future__ import annotations

import logging
import math
import statistics
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from typing import Any

from ..protocol import UsageCounters

log = logging.getLogger(__name__)


class EmptyRecords(ValueError):
    pass


@dataclass
class RunRecord:
    task_id: str
    method: str
    predicted_plan: list[str]
    verdict: str
    complexity: str
    usage: UsageCounters
    seed: int
    wall_time: float = 0.0
    stage: str = "eval"
    params: dict[str, Any] = field(default_factory=dict)
    diagnostics: int = 0

    @property
    def success(self) -> bool:
        return self.verdict == "success"

    def to_json(self) -> dict[str, Any]:
        """Serializable form; wall time is left out so record files stay reproducible."""
        return {
            "task_id": self.task_id,
            "method": self.method,
            "seed": self.seed,
            "stage": self.stage,
            "params": self.params,
            "complexity": self.complexity,
            "verdict": self.verdict,
            "predicted_plan": self.predicted_plan,
            "usage": self.usage.to_dict(),
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> RunRecord:
        return cls(
            task_id=data["task_id"],
            method=data["method"],
            predicted_plan=list(data["predicted_plan"]),
            verdict=data["verdict"],
            complexity=data["complexity"],
            usage=UsageCounters(**data["usage"]),
            seed=data["seed"],
            wall_time=data.get("wall_time", 0.0),
            stage=data.get("stage", "eval"),
            params=data.get("params", {}),
            diagnostics=data.get("diagnostics", 0),
        )


@dataclass
class Tally:
    simple_total: int = 0
    simple_success: int = 0
    complex_total: int = 0
    complex_success: int = 0
    tokens: int = 0
    calls: int = 0
    wall_time: float = 0.0

    @property
    def total(self) -> int:
        return self.simple_total + self.complex_total

    @property
    def successes(self) -> int:
        return self.simple_success + self.complex_success


def _pct(num: int, den: int) -> float:
    return 100.0 * num / den if den else 0.0


@dataclass
class MetricsReport:
    simple_acc: float
    complex_acc: float
    overall_acc: float
    n_simple: int
    n_complex: int
    n_total: int
    successes: int
    total_tokens: int
    total_calls: int
    mean_tokens: float
    mean_calls: float
    token_efficiency: float
    call_efficiency: float
    mean_wall_time: float
    per_seed: dict[int, dict[str, float]] = field(default_factory=dict)
    seed_mean: dict[str, float] = field(default_factory=dict)
    seed_std: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        data = asdict(self)
        data["per_seed"] = {str(k): v for k, v in self.per_seed.items()}
        return data


SEED_METRICS = ("simple_acc", "complex_acc", "overall_acc", "token_efficiency", "call_efficiency", "mean_tokens", "mean_calls")


def _tally(records: Iterable[RunRecord]) -> Tally:
    t = Tally()
    times = []
    for r in records:
        if r.complexity == "simple":
            t.simple_total += 1
            t.simple_success += r.success
        else:
            t.complex_total += 1
            t.complex_success += r.success
        t.tokens += r.usage.total_tokens
        t.calls += r.usage.calls
        times.append(r.wall_time)
    t.wall_time = math.fsum(times)
    return t


def _summary(t: Tally) -> dict[str, float]:
    if t.calls == 0:
        log.warning("no LLM calls recorded; call efficiency reported as 0")
    return {
        "simple_acc": _pct(t.simple_success, t.simple_total),
        "complex_acc": _pct(t.complex_success, t.complex_total),
        "overall_acc": _pct(t.successes, t.total),
        # success rate per 10,000 tokens
        "token_efficiency": 100.0 * t.successes / (t.tokens / 10_000) if t.tokens else 0.0,
        "call_efficiency": 100.0 * t.successes / t.calls if t.calls else 0.0,
        "mean_tokens": t.tokens / t.total if t.total else 0.0,
        "mean_calls": t.calls / t.total if t.total else 0.0,
    }


def compute_metrics(records: Sequence[RunRecord]) -> MetricsReport:
    if not records:
        raise EmptyRecords("no records to aggregate")
    pooled = _tally(records)
    summary = _summary(pooled)
    seeds = sorted({r.seed for r in records})
    per_seed = {s: _summary(_tally(r for r in records if r.seed == s)) for s in seeds}
    seed_mean = {m: statistics.fmean(per_seed[s][m] for s in seeds) for m in SEED_METRICS}
    seed_std = {m: statistics.pstdev([per_seed[s][m] for s in seeds]) for m in SEED_METRICS}
    return MetricsReport(
        simple_acc=summary["simple_acc"],
        complex_acc=summary["complex_acc"],
        overall_acc=summary["overall_acc"],
        n_simple=pooled.simple_total,
        n_complex=pooled.complex_total,
        n_total=pooled.total,
        successes=pooled.successes,
        total_tokens=pooled.tokens,
        total_calls=pooled.calls,
        mean_tokens=summary["mean_tokens"],
        mean_calls=summary["mean_calls"],
        token_efficiency=summary["token_efficiency"],
        call_efficiency=summary["call_efficiency"],
        mean_wall_time=pooled.wall_time / pooled.total,
        per_seed=per_seed,
        seed_mean=seed_mean,
        seed_std=seed_std,
    )


def build_residual(records: Iterable[RunRecord], tasks: Sequence) -> list:
    """Tasks whose screening run failed, keeping the order of ``tasks``."""
    failed = {r.task_id for r in records if not r.success}
    return [t for t in tasks if t.id in failed]
