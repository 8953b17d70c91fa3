from __future__ import annotations

import json
from pathlib import Path

import pytest

from treeplan.domain import GoldStep, Task, ToolParam, ToolSpec

FIXTURES = Path(__file__).parent / "fixtures"


def make_tool(name: str, *params: str) -> ToolSpec:
    return ToolSpec(name, f"{name} tool", tuple(ToolParam(p) for p in params))


CATALOG = (
    make_tool("search", "query"),
    make_tool("summarize", "text"),
    make_tool("send_email", "to", "content"),
    make_tool("translate", "text", "target_language"),
    make_tool("set_alarm", "time"),
)


def pipeline_task() -> Task:
    """3-step chain whose later steps consume earlier outputs; 5-tool catalog."""
    return Task(
        "pipe",
        "Search for 'solar news', summarize what you find, and email the summary to a@b.c.",
        CATALOG,
        (
            GoldStep.of("search", {"query": "solar news"}, "search_hits"),
            GoldStep.of("summarize", {"text": "search_hits"}, "summary_txt"),
            GoldStep.of("send_email", {"to": "a@b.c", "content": "summary_txt"}),
        ),
        ((0, 1), (1, 2)),
    )


def simple_task() -> Task:
    return Task("alarm", "Set an alarm for 7:00 AM.", CATALOG, (GoldStep.of("set_alarm", {"time": "7:00 AM"}),))


@pytest.fixture
def pipe() -> Task:
    return pipeline_task()


@pytest.fixture
def simple() -> Task:
    return simple_task()


@pytest.fixture(scope="session")
def case_lines() -> dict:
    return json.loads((FIXTURES / "case_lines.json").read_text(encoding="utf-8"))
