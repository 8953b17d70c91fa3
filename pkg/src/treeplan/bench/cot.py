"""Chain-of-thought baseline with self-consistency voting."""

from __future__ import annotations

import logging
from collections import Counter

from ..domain import Action, ParseError, Task, action_candidates, parse_action
from ..engine import PlanResult
from ..protocol import DEFAULT_SAMPLING, AgentBackend, AgentRole, SamplingParams, UsageCounters, build_cot_prompt

log = logging.getLogger(__name__)

VOTE_TEMPERATURE = 0.7


def parse_plan(text: str) -> list[Action] | None:
    """Every parseable action line up to the first finish; None if there are none."""
    plan: list[Action] = []
    for cand in action_candidates(text):
        try:
            action = parse_action(cand)
        except ParseError:
            continue
        plan.append(action)
        if action.is_finish:
            break
    return plan or None


def run_cot(task: Task, backend: AgentBackend, k: int = 1, seed: int = 0) -> PlanResult:
    """Sample ``k`` whole plans and return the most common one (ties: first sampled)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    base = DEFAULT_SAMPLING[AgentRole.PLANNER]
    sampling = SamplingParams(VOTE_TEMPERATURE, base.max_output) if k > 1 else base
    prompt = build_cot_prompt(task)
    usage = UsageCounters()
    samples: list[list[Action]] = []
    diagnostics = []
    for i in range(k):
        text, call_usage = backend.complete(AgentRole.PLANNER, prompt, sampling)
        usage = usage + call_usage
        plan = parse_plan(text)
        if plan is None:
            diagnostics.append({"event": "cot_unparseable", "sample": i})
            continue
        samples.append(plan)
    if not samples:
        diagnostics.append({"event": "all_samples_unparseable"})
        log.info("task %s: all %d CoT samples unparseable", task.id, k)
        chosen: list[Action] = []
    else:
        keys = ["\n".join(a.render() for a in plan) for plan in samples]
        counts = Counter(keys)
        top = max(counts.values())
        chosen = samples[next(i for i, key in enumerate(keys) if counts[key] == top)]
    return PlanResult(
        plan=chosen,
        iterations_used=k,
        usage={AgentRole.PLANNER: usage, AgentRole.SIMULATOR: UsageCounters(), AgentRole.CRITIC: UsageCounters()},
        diagnostics=diagnostics,
    )
