"""Dataset files: ``{"tools": [...], "tasks": [...]}`` JSON documents."""

from __future__ import annotations

import json
import random
from importlib import resources
from pathlib import Path
from typing import Any

from ..domain import GoldStep, Task, TaskError, ToolParam, ToolSpec

SHIPPED = ("daily_life", "ml_pipeline", "trap_suite")


class SchemaError(ValueError):
    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class SampleTooLarge(ValueError):
    pass


def _require(obj: Any, key: str, kind: type | tuple[type, ...], path: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{path}.{key}", "missing")
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


def _tool(raw: Any, path: str) -> ToolSpec:
    name = _require(raw, "name", str, path)
    params = []
    for i, p in enumerate(raw.get("params", [])):
        ppath = f"{path}.params[{i}]"
        try:
            params.append(
                ToolParam(
                    _require(p, "name", str, ppath),
                    p.get("type", "string"),
                    bool(p.get("required", True)),
                )
            )
        except TaskError as exc:
            raise SchemaError(ppath, str(exc)) from None
    try:
        return ToolSpec(name, raw.get("description", ""), tuple(params))
    except TaskError as exc:
        raise SchemaError(path, str(exc)) from None


def parse_dataset(doc: Any, source: str = "$") -> tuple[list[ToolSpec], list[Task]]:
    tools_raw = _require(doc, "tools", list, source)
    catalog = [_tool(t, f"{source}.tools[{i}]") for i, t in enumerate(tools_raw)]
    by_name = {t.name: t for t in catalog}
    if len(by_name) != len(catalog):
        raise SchemaError(f"{source}.tools", "duplicate tool names")
    tasks = []
    seen_ids = set()
    for i, raw in enumerate(_require(doc, "tasks", list, source)):
        path = f"{source}.tasks[{i}]"
        task_id = str(_require(raw, "id", (str, int), path))
        if task_id in seen_ids:
            raise SchemaError(f"{path}.id", f"duplicate task id {task_id!r}")
        seen_ids.add(task_id)
        instruction = _require(raw, "instruction", str, path)
        subset = raw.get("tools")
        if subset is None:
            task_catalog = tuple(catalog)
        else:
            missing = [n for n in subset if n not in by_name]
            if missing:
                raise SchemaError(f"{path}.tools", f"unknown tools {missing}")
            task_catalog = tuple(by_name[n] for n in subset)
        gold = []
        for j, step in enumerate(_require(raw, "gold_plan", list, path)):
            spath = f"{path}.gold_plan[{j}]"
            tool = _require(step, "tool", str, spath)
            if tool not in {t.name for t in task_catalog}:
                raise SchemaError(f"{spath}.tool", f"tool {tool!r} not in catalog")
            args = step.get("args", {})
            if not isinstance(args, dict):
                raise SchemaError(f"{spath}.args", "expected object")
            output = step.get("output")
            if output is not None and not isinstance(output, str):
                raise SchemaError(f"{spath}.output", "expected string")
            gold.append(GoldStep.of(tool, args, output))
        edges = []
        for k, edge in enumerate(raw.get("gold_edges", [])):
            if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(x, int) for x in edge)):
                raise SchemaError(f"{path}.gold_edges[{k}]", "expected [from, to]")
            edges.append((edge[0], edge[1]))
        try:
            tasks.append(Task(task_id, instruction, task_catalog, tuple(gold), tuple(edges)))
        except (TaskError, ValueError) as exc:
            raise SchemaError(path, str(exc)) from None
    return catalog, tasks


def resolve_dataset(name_or_path: str | Path) -> Path:
    """Shipped dataset name (e.g. ``daily_life``) or a filesystem path."""
    if str(name_or_path) in SHIPPED:
        with resources.as_file(resources.files("treeplan.data").joinpath(f"{name_or_path}.json")) as p:
            return Path(p)
    return Path(name_or_path)


def load_dataset(path: str | Path) -> tuple[list[ToolSpec], list[Task]]:
    path = resolve_dataset(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}", f"invalid JSON: {exc.msg}") from None
    return parse_dataset(doc, source="$")


def dataset_to_dict(catalog: list[ToolSpec], tasks: list[Task]) -> dict:
    full = [t.name for t in catalog]
    doc_tasks = []
    for task in tasks:
        entry: dict[str, Any] = {"id": task.id, "instruction": task.instruction}
        names = [t.name for t in task.catalog]
        if names != full:
            entry["tools"] = names
        steps = []
        for step in task.gold_plan:
            s: dict[str, Any] = {"tool": step.tool, "args": step.arg_map}
            if step.output is not None:
                s["output"] = step.output
            steps.append(s)
        entry["gold_plan"] = steps
        entry["gold_edges"] = [list(e) for e in task.gold_edges]
        doc_tasks.append(entry)
    return {
        "tools": [
            {
                "name": t.name,
                "description": t.description,
                "params": [{"name": p.name, "type": p.type, "required": p.required} for p in t.params],
            }
            for t in catalog
        ],
        "tasks": doc_tasks,
    }


def save_dataset(path: str | Path, catalog: list[ToolSpec], tasks: list[Task]) -> None:
    Path(path).write_text(json.dumps(dataset_to_dict(catalog, tasks), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def sample_split(tasks: list[Task], seed: int, n: int | None = None) -> list[Task]:
    """Shuffle with ``seed`` and keep the first ``n`` tasks."""
    n = len(tasks) if n is None else n
    if n > len(tasks) or n < 0:
        raise SampleTooLarge(f"asked for {n} tasks from a pool of {len(tasks)}")
    pool = list(tasks)
    random.Random(seed).shuffle(pool)
    return pool[:n]
