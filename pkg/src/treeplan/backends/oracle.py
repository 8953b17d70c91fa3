"""Scripted backend that answers every role from a task's gold plan.

The oracle only ever sees prompt text, exactly like a live model: it finds
the task by its instruction, re-parses the plan history out of the prompt,
and derives its reply from the gold plan. Errors are injected at configured
rates from a random stream keyed on (seed, role, prompt, sample index).
"""

from __future__ import annotations

import hashlib
import random
import threading
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

from ..domain import Action, ParseError, Task, normalize_args, parse_action, split_lines
from ..protocol import (
    COT_MARKER,
    CRITIC_TRAJECTORY_HEADER,
    MINIMAL_HISTORY_HEADER,
    MINIMAL_MARKER,
    OBS_MARKER,
    PLANNER_HISTORY_HEADER,
    AgentRole,
    SamplingParams,
    UsageCounters,
    heuristic_usage,
    parse_observation,
)

FINISH_REASON = "All tasks completed successfully."


@dataclass(frozen=True)
class OracleConfig:
    planner_error_rate: float = 0.0
    simulator_noise_rate: float = 0.0
    critic_fidelity: float = 1.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        for name in ("planner_error_rate", "simulator_noise_rate", "critic_fidelity"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


def same_call(a: Action, tool: str, args: dict[str, Any]) -> bool:
    return not a.is_finish and a.tool == tool and normalize_args(a.arg_map) == normalize_args(args)


def _unquote(value: str) -> str:
    v = value.strip()
    if len(v) >= 2 and v[0] == v[-1] and v[0] in "\"'":
        return v[1:-1]
    return v


@dataclass
class _History:
    actions: list[Action]
    observations: list[str | None]


def _parse_history(block: str) -> _History:
    actions: list[Action] = []
    observations: list[str | None] = []
    for line in split_lines(block):
        line = line.strip()
        if not line or line == "(empty plan)":
            continue
        if line.startswith(OBS_MARKER):
            if actions:
                observations[-1] = parse_observation(line).value
            continue
        try:
            action = parse_action(line)
        except ParseError:
            continue
        actions.append(action)
        observations.append(None)
    return _History(actions, observations)


def _section(prompt: str, header: str, end: str | None) -> str:
    start = prompt.find(header)
    if start < 0:
        return ""
    start += len(header)
    stop = prompt.find(end, start) if end else -1
    return prompt[start:stop] if stop >= 0 else prompt[start:]


class OracleBackend:
    """Deterministic stand-in for an LLM serving all three roles."""

    def __init__(self, tasks: Iterable[Task], config: OracleConfig | None = None) -> None:
        self.config = config or OracleConfig()
        # longest instruction first so a prefix never shadows a longer match
        self._tasks = sorted(tasks, key=lambda t: len(t.instruction), reverse=True)
        self._draws: Counter[tuple[str, str]] = Counter()
        self._lock = threading.Lock()
        self.calls = 0

    # -- plumbing ------------------------------------------------------------------

    def complete(self, role: AgentRole, prompt: str, sampling: SamplingParams) -> tuple[str, UsageCounters]:
        role = AgentRole(role)
        with self._lock:
            self.calls += 1
            if sampling.temperature > 0:
                key = (role.value, prompt)
                index = self._draws[key]
                self._draws[key] += 1
            else:
                index = 0
        rng = self._rng(role.value, prompt, index)
        task = self._find_task(prompt)
        if task is None:
            reply = "I cannot identify the task."
        elif role is AgentRole.PLANNER:
            reply = self._cot(task, rng) if COT_MARKER in prompt else self._plan(task, prompt, rng)
        elif role is AgentRole.SIMULATOR:
            reply = self._simulate(task, prompt, rng)
        else:
            reply = self._criticize(task, prompt, rng)
        return reply, heuristic_usage(prompt, reply)

    def _rng(self, role: str, prompt: str, index: int) -> random.Random:
        digest = hashlib.sha256(f"{self.config.rng_seed}|{role}|{index}|{prompt}".encode()).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))

    def _find_task(self, prompt: str) -> Task | None:
        for task in self._tasks:
            if task.instruction in prompt:
                return task
        return None

    # -- planner ---------------------------------------------------------------------

    def expected_calls(self, task: Task, history: _History) -> tuple[int, list[Action]]:
        """Gold actions with dependent arguments filled from the observed history.

        Returns the length of the history prefix that agrees with them.
        """
        outputs = task.gold_outputs()
        expected: list[Action] = []
        matched = 0
        for j, step in enumerate(task.gold_plan):
            args = step.arg_map
            for key, value in args.items():
                for i in range(j):
                    if isinstance(value, str) and value == outputs[i] and i < matched:
                        seen = history.observations[i]
                        if seen is not None:
                            args[key] = _unquote(seen)
            action = Action.call(step.tool, args)
            expected.append(action)
            if matched == j and j < len(history.actions) and history.actions[j].render() == action.render():
                matched += 1
        return matched, expected

    def _plan(self, task: Task, prompt: str, rng: random.Random) -> str:
        if MINIMAL_MARKER in prompt:
            block = _section(prompt, MINIMAL_HISTORY_HEADER, None)
        else:
            block = _section(prompt, PLANNER_HISTORY_HEADER, "\n\nRespond with ONLY")
        history = _parse_history(block)
        matched, expected = self.expected_calls(task, history)
        if matched >= len(expected):
            proposal = Action.finish(FINISH_REASON)
        else:
            proposal = expected[matched]
        if rng.random() < self.config.planner_error_rate:
            proposal = self.decoy(task, matched, rng) or proposal
        return proposal.render()

    def decoy(self, task: Task, position: int, rng: random.Random) -> Action | None:
        """A plausible wrong action: an off-plan catalog tool, else a mis-parameterised gold call."""
        gold_tools = {s.tool for s in task.gold_plan}
        others = [t for t in task.catalog if t.name not in gold_tools]
        if others:
            tool = rng.choice(others)
            args = {p.name: _decoy_value(p.type, p.name) for p in tool.params if p.required}
            return Action.call(tool.name, args)
        if not task.gold_plan:
            return None
        step = task.gold_plan[min(position, len(task.gold_plan) - 1)]
        args = step.arg_map
        if not args:
            return None
        key = rng.choice(sorted(args))
        args[key] = _perturb(key, args[key])
        return Action.call(step.tool, args)

    def _cot(self, task: Task, rng: random.Random) -> str:
        lines = []
        for j, step in enumerate(task.gold_plan):
            action = step.as_action()
            if rng.random() < self.config.planner_error_rate:
                action = self.decoy(task, j, rng) or action
            lines.append(action.render())
        lines.append(Action.finish(FINISH_REASON).render())
        return "\n".join(lines)

    # -- simulator -------------------------------------------------------------------

    def _simulate(self, task: Task, prompt: str, rng: random.Random) -> str:
        block = _section(prompt, "### Tool Call to Simulate:\n", "\n\n")
        try:
            action = parse_action(block)
        except ParseError:
            return "Observation: tool_output = \"error: unreadable call\""
        outputs = task.gold_outputs()
        value = None
        candidates = [i for i, s in enumerate(task.gold_plan) if s.tool == action.tool]
        for i in candidates:
            if same_call(action, task.gold_plan[i].tool, task.gold_plan[i].arg_map):
                value = outputs[i]
                break
        if value is None and candidates:
            value = outputs[candidates[0]]
        if value is None:
            value = f"{(action.tool or 'tool').lower().replace(' ', '_')}_output"
        if rng.random() < self.config.simulator_noise_rate:
            value = f"corrupted_{value}"
        return f'Observation: tool_output = "{value}"'

    # -- critic ----------------------------------------------------------------------

    def gold_progress(self, task: Task, actions: list[Action]) -> float:
        """Fraction of gold steps matched as an in-order prefix of ``actions``.

        Extra calls beyond the gold plan enlarge the denominator.
        """
        matched, denom = _prefix_match(task, actions)
        return matched / denom if denom else 1.0

    def _criticize(self, task: Task, prompt: str, rng: random.Random) -> str:
        block = _section(prompt, CRITIC_TRAJECTORY_HEADER, "\n\n### Instruction")
        history = _parse_history(block)
        progress = self.gold_progress(task, history.actions)
        fid = self.config.critic_fidelity
        score = fid * progress + (1.0 - fid) * rng.random()
        matched, _ = _prefix_match(task, history.actions)
        return f"Score: {round(score, 6)!r} | Justification: {matched} of {len(task.gold_plan)} required steps done in order"


def _prefix_match(task: Task, actions: list[Action]) -> tuple[int, int]:
    calls = [a for a in actions if not a.is_finish]
    matched = 0
    for action, step in zip(calls, task.gold_plan):
        if not same_call(action, step.tool, step.arg_map):
            break
        matched += 1
    return matched, max(len(task.gold_plan), len(calls))


def _decoy_value(kind: str, name: str) -> Any:
    return {"string": f"{name}_value", "number": 1, "boolean": True, "object": {}}[kind]


def _perturb(key: str, value: Any) -> Any:
    if isinstance(value, bool):
        return not value
    if isinstance(value, (int, float)):
        return value + 1
    if isinstance(value, str):
        return f"user's {key}"
    if isinstance(value, list):
        return value + ["other"]
    return {**value, "extra": "all"}
