"""Prompt construction and reply parsing for the Planner, Simulator and Critic."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Protocol

from .domain import Observation, ParseError, PlanState, Task, ToolSpec, parse_action, render_history, split_lines


class AgentRole(str, Enum):
    PLANNER = "planner"
    SIMULATOR = "simulator"
    CRITIC = "critic"


@dataclass(frozen=True)
class SamplingParams:
    temperature: float = 0.0
    max_output: int = 256

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output < 1:
            raise ValueError("max_output must be >= 1")


DEFAULT_SAMPLING = {
    AgentRole.PLANNER: SamplingParams(temperature=0.1),
    AgentRole.SIMULATOR: SamplingParams(temperature=0.0),
    AgentRole.CRITIC: SamplingParams(temperature=0.0),
}


@dataclass(frozen=True)
class UsageCounters:
    prompt_tokens: int = 0
    completion_tokens: int = 0
    calls: int = 0

    def __post_init__(self) -> None:
        if min(self.prompt_tokens, self.completion_tokens, self.calls) < 0:
            raise ValueError("usage counters must be non-negative")

    def __add__(self, other: UsageCounters) -> UsageCounters:
        return UsageCounters(
            self.prompt_tokens + other.prompt_tokens,
            self.completion_tokens + other.completion_tokens,
            self.calls + other.calls,
        )

    @property
    def total_tokens(self) -> int:
        return self.prompt_tokens + self.completion_tokens

    def to_dict(self) -> dict[str, int]:
        return {
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "calls": self.calls,
        }


def estimate_tokens(text: str) -> int:
    """Synthetic token count: one token per four characters, rounded up."""
    return math.ceil(len(text) / 4)


def heuristic_usage(prompt: str, reply: str) -> UsageCounters:
    return UsageCounters(estimate_tokens(prompt), estimate_tokens(reply), 1)


@dataclass(frozen=True)
class CriticVerdict:
    score: float
    justification: str
    flagged: bool = False


class BackendError(RuntimeError):
    """A backend call failed at the transport level."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.diagnostics = []


class BackendTimeout(BackendError):
    pass


class HttpStatusError(BackendError):
    def __init__(self, code: int, body: str = "") -> None:
        super().__init__(f"HTTP {code}")
        self.code = code
        self.body = body


class MalformedResponse(BackendError):
    pass


class AgentBackend(Protocol):
    def complete(
        self, role: AgentRole, prompt: str, sampling: SamplingParams
    ) -> tuple[str, UsageCounters]: ...


class RejectFinish(ValueError):
    """``finish`` actions are never sent to the Simulator."""


class EmptyTrajectory(ValueError):
    """The Critic needs at least one step to score."""


# -- templates -----------------------------------------------------------------

PLANNER_RULE = "Generate ONLY the single next `api_call(...)` or the final `finish(...)` call."
SIMULATOR_RULE = "Your entire response MUST be a single line starting with `Observation: tool_output = `."
CRITIC_RULE = "Respond with ONLY a single line: `Score: <float_0.0_to_1.0> | Justification: <brief_explanation>`"

PLANNER_HISTORY_HEADER = "### Current Plan:\n"
MINIMAL_HISTORY_HEADER = "History:\n"
CRITIC_TRAJECTORY_HEADER = "### Current Plan Trajectory\n"
COT_MARKER = "Write the complete plan that solves the user's request"
MINIMAL_MARKER = "Output the next api_call or finish line for this task:"


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    return resources.files("treeplan.templates").joinpath(f"{name}.txt").read_text(encoding="utf-8")


def describe_tools(catalog: tuple[ToolSpec, ...] | list[ToolSpec]) -> str:
    if not catalog:
        return "(no tools available)"
    lines = []
    for tool in catalog:
        params = ", ".join(
            f"{p.name} ({p.type}{', required' if p.required else ', optional'})" for p in tool.params
        )
        desc = tool.description.strip() or "No description."
        lines.append(f"- {tool.name}: {desc} Parameters: {params or 'none'}")
    return "\n".join(lines)


def describe_graph(task: Task) -> str:
    """Gold dependency hints; only for oracle-debug runs since it leaks the answer."""
    if not task.gold_edges:
        return ""
    lines = ["Dependency hints:"]
    for a, b in task.gold_edges:
        lines.append(f"- {task.gold_plan[a].tool} must run before {task.gold_plan[b].tool}")
    return "\n".join(lines)


def build_planner_prompt(
    task: Task, state: PlanState, *, persona: bool = True, graph_hints: bool = False
) -> str:
    if state.is_terminal:
        raise ValueError("cannot plan past a finish step")
    fields = {
        "user_request": task.instruction,
        "tools_description": describe_tools(task.catalog),
        "graph_description": describe_graph(task) if graph_hints else "",
        "current_plan_history": render_history(state),
    }
    template = load_template("planner" if persona else "planner_minimal")
    return template.format_map(fields)


def build_simulator_prompt(task: Task, action_text: str) -> str:
    action = parse_action(action_text)
    if action.is_finish:
        raise RejectFinish("finish actions are not simulated")
    return load_template("simulator").format_map(
        {"user_request": task.instruction, "api_call_str": action.render()}
    )


def build_critic_prompt(task: Task, state: PlanState) -> str:
    if not state.steps:
        raise EmptyTrajectory("critic needs a non-empty trajectory")
    return load_template("critic").format_map(
        {"user_request": task.instruction, "trajectory": render_history(state)}
    )


def build_cot_prompt(task: Task) -> str:
    return load_template("cot").format_map(
        {"user_request": task.instruction, "tools_description": describe_tools(task.catalog)}
    )


# -- reply parsing -------------------------------------------------------------

OBS_MARKER = "Observation: tool_output ="
_SCORE = re.compile(r"Score:\s*\**\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)")
_JUSTIFICATION = re.compile(r"Justification:\s*(.*)", re.DOTALL)


def parse_observation(text: str) -> Observation:
    for line in split_lines(text):
        idx = line.find(OBS_MARKER)
        if idx < 0:
            continue
        value = line[idx + len(OBS_MARKER):].strip().rstrip("`").strip()
        if not value:
            raise ParseError("observation marker without a value", raw=text)
        return Observation(value)
    raise ParseError("no 'Observation: tool_output =' marker", raw=text)


def parse_critic(text: str) -> CriticVerdict:
    m = _SCORE.search(text)
    if m is None:
        raise ParseError("no parseable 'Score:' field", raw=text)
    score = float(m.group(1))
    if math.isnan(score):
        raise ParseError("score is not a number", raw=text)
    score = min(1.0, max(0.0, score))
    j = _JUSTIFICATION.search(text, m.end())
    justification = j.group(1).strip().rstrip("`").strip() if j else ""
    return CriticVerdict(score, justification)
