"""Figures and tab-delimited tables from aggregate metric rows."""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any, TextIO

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0
WIDTH_IN = 6.0

TABLE_COLUMNS = (
    "method", "params", "n_total", "simple_acc", "complex_acc", "overall_acc", "overall_acc_std",
    "mean_tokens", "mean_calls", "token_efficiency", "call_efficiency",
)


def _style(ax) -> None:
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.grid(axis="y", linewidth=0.4, alpha=0.5)


def row_label(row: dict[str, Any]) -> str:
    params = row.get("params") or {}
    if not params:
        return row["method"]
    return row["method"] + " " + ",".join(f"{k}={v}" for k, v in sorted(params.items()))


def load_rows(run_dir: str | Path) -> list[dict[str, Any]]:
    path = Path(run_dir) / "metrics.json"
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise FileNotFoundError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return data["rows"]


def write_table(rows: Sequence[dict[str, Any]], fh: TextIO, sep: str = "\t") -> None:
    fh.write(sep.join(TABLE_COLUMNS) + "\n")
    for row in rows:
        cells = [
            row["method"],
            json.dumps(row.get("params") or {}, sort_keys=True),
            str(row["n_total"]),
            *(f"{row[k]:.2f}" for k in ("simple_acc", "complex_acc", "overall_acc")),
            f"{row['seed_std']['overall_acc']:.2f}",
            *(f"{row[k]:.2f}" for k in ("mean_tokens", "mean_calls", "token_efficiency", "call_efficiency")),
        ]
        fh.write(sep.join(cells) + "\n")


def accuracy_figure(rows: Sequence[dict[str, Any]], path: Path) -> Path:
    labels = [row_label(r) for r in rows]
    fig, ax = plt.subplots(figsize=(max(WIDTH_IN, 0.9 * len(rows)), WIDTH_IN * GOLDEN))
    xs = range(len(rows))
    means = [r["seed_mean"]["overall_acc"] for r in rows]
    stds = [r["seed_std"]["overall_acc"] for r in rows]
    ax.bar(xs, means, yerr=stds, capsize=3, color="#4c72b0", edgecolor="black", linewidth=0.5)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("overall success (%)")
    ax.set_ylim(0, 105)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def efficiency_figure(rows: Sequence[dict[str, Any]], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(WIDTH_IN, WIDTH_IN * GOLDEN))
    for r in rows:
        ax.scatter(r["mean_tokens"], r["overall_acc"], s=30, edgecolor="black", linewidth=0.5)
        ax.annotate(row_label(r), (r["mean_tokens"], r["overall_acc"]), fontsize=7,
                    xytext=(4, 3), textcoords="offset points")
    ax.set_xlabel("mean tokens per task")
    ax.set_ylabel("overall success (%)")
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def sweep_figures(rows: Sequence[dict[str, Any]], out: Path) -> list[Path]:
    """One line plot per swept search parameter, one line per method."""
    written = []
    keys = sorted({k for r in rows for k in (r.get("params") or {})})
    for key in keys:
        series: dict[str, list[tuple[float, float, float]]] = {}
        for r in rows:
            params = r.get("params") or {}
            if key in params:
                series.setdefault(r["method"], []).append(
                    (params[key], r["seed_mean"]["overall_acc"], r["seed_std"]["overall_acc"])
                )
        if not any(len(pts) > 1 for pts in series.values()):
            continue
        fig, ax = plt.subplots(figsize=(WIDTH_IN, WIDTH_IN * GOLDEN))
        for method, pts in sorted(series.items()):
            pts.sort()
            ax.errorbar([p[0] for p in pts], [p[1] for p in pts], yerr=[p[2] for p in pts],
                        marker="o", capsize=3, label=method)
        ax.set_xlabel(key)
        ax.set_ylabel("overall success (%)")
        ax.legend(frameon=False, fontsize=8)
        _style(ax)
        fig.tight_layout()
        path = out / f"sweep_{key}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def render_figures(rows: Sequence[dict[str, Any]], out: str | Path) -> list[Path]:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if not rows:
        return []
    return [
        accuracy_figure(rows, out / "accuracy.png"),
        efficiency_figure(rows, out / "efficiency.png"),
        *sweep_figures(rows, out),
    ]
