from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeplan.domain import Action, Observation, ParseError, PlanState, Task, append_step, render_history
from treeplan.protocol import (
    DEFAULT_SAMPLING,
    AgentRole,
    EmptyTrajectory,
    RejectFinish,
    SamplingParams,
    UsageCounters,
    build_cot_prompt,
    build_critic_prompt,
    build_planner_prompt,
    build_simulator_prompt,
    estimate_tokens,
    heuristic_usage,
    parse_critic,
    parse_observation,
)

from .conftest import make_tool

PLANNER_LINES = [
    "You are an expert assistant that only responds with code.",
    "Your task is to create a plan to solve the user's request by generating a sequence of tool calls.",
    "1. Generate ONLY the single next `api_call(...)` or the final `finish(...)` call.",
    "2. If a previous step produced an observation `tool_output = <value>`, you MUST use that exact `<value>` in the arguments of the next tool.",
    '3. When the user\'s request is fully satisfied, you MUST call `finish(reason="<final answer and summary>")`.',
    '`finish(reason="<explanation>")`: Call this ONLY when the task is complete.',
    "Respond with ONLY the next line of code:",
]
SIMULATOR_LINES = [
    "You are a simulated API tool. Your role is to provide a realistic, one-line observation for the given tool call, based on the user's overall goal.",
    "1. Your entire response MUST be a single line starting with `Observation: tool_output = `.",
    '2. The value part should be a plausible result. For tools that create files, the value should be a new filename string (e.g., "edited_image.png"). For analysis tools, it should be a short, descriptive string (e.g., "a red sports car").',
    "3. The observation must be grounded in the user's request.",
    "### Your Single-Line Response:",
]
CRITIC_LINES = [
    "As a Critic, evaluate the following plan's likelihood of success.",
    "Evaluate the plan. Is it coherent? Is it making progress? Is it likely to succeed?",
    "Respond with ONLY a single line: `Score: <float_0.0_to_1.0> | Justification: <brief_explanation>`",
]


def _state(*calls: str) -> PlanState:
    state = PlanState()
    for i, tool in enumerate(calls):
        state = append_step(state, Action.call(tool, {"x": i}), Observation(f'"out_{i}"'))
    return state


def test_sampling_defaults():
    assert DEFAULT_SAMPLING[AgentRole.PLANNER].temperature == 0.1
    assert DEFAULT_SAMPLING[AgentRole.SIMULATOR].temperature == 0.0
    assert DEFAULT_SAMPLING[AgentRole.CRITIC].temperature == 0.0
    with pytest.raises(ValueError):
        SamplingParams(-0.1)


def test_planner_prompt_empty_state(simple):
    prompt = build_planner_prompt(simple, PlanState())
    assert "### Current Plan:\n(empty plan)" in prompt
    for line in PLANNER_LINES:
        assert line in prompt
    assert simple.instruction in prompt


def test_planner_prompt_lists_each_tool_once():
    task = Task("t", "do it", (make_tool("alpha", "a"), make_tool("beta", "b")), ())
    prompt = build_planner_prompt(task, PlanState())
    block = prompt.split("### Tools:\n", 1)[1].split("### Finish Action:", 1)[0]
    assert block.count("- alpha:") == 1 and block.count("- beta:") == 1


def test_planner_prompt_hides_graph_by_default(pipe):
    assert "must run before" not in build_planner_prompt(pipe, PlanState())
    assert "search must run before summarize" in build_planner_prompt(pipe, PlanState(), graph_hints=True)


def test_planner_prompt_rejects_terminal(simple):
    done = append_step(PlanState(), Action.finish("x"))
    with pytest.raises(ValueError):
        build_planner_prompt(simple, done)


def test_minimal_planner_prompt_drops_persona(simple):
    prompt = build_planner_prompt(simple, PlanState(), persona=False)
    assert "You are an expert assistant" not in prompt
    assert simple.instruction in prompt


def test_simulator_prompt(simple):
    prompt = build_simulator_prompt(simple, 'api_call("set_alarm", {"time": "7:00 AM"})')
    for line in SIMULATOR_LINES:
        assert line in prompt
    assert f'### User\'s Goal:\n"{simple.instruction}"' in prompt
    with pytest.raises(RejectFinish):
        build_simulator_prompt(simple, 'finish(reason="done")')


def test_critic_prompt(pipe):
    state = _state("search", "summarize")
    prompt = build_critic_prompt(pipe, state)
    for line in CRITIC_LINES:
        assert line in prompt
    block = prompt.split("### Current Plan Trajectory\n", 1)[1].split("\n\n### Instruction", 1)[0]
    assert block == render_history(state)
    with pytest.raises(EmptyTrajectory):
        build_critic_prompt(pipe, PlanState())


def test_cot_prompt_has_request_and_tools(pipe):
    prompt = build_cot_prompt(pipe)
    assert pipe.instruction in prompt
    for tool in pipe.catalog:
        assert f"- {tool.name}:" in prompt


def test_braces_in_request_survive_formatting():
    task = Task("b", "Use {curly} braces {0}", (make_tool("t", "a"),), ())
    assert "Use {curly} braces {0}" in build_planner_prompt(task, PlanState())


# -- parsing -----------------------------------------------------------------------


def test_parse_observation():
    assert parse_observation('Observation: tool_output = "edited_image.png"') == Observation('"edited_image.png"')
    assert parse_observation('Sure.\nObservation: tool_output = "x.wav"\nmore').value == '"x.wav"'
    with pytest.raises(ParseError):
        parse_observation("The result is fine")
    with pytest.raises(ParseError):
        parse_observation("Observation: tool_output =   ")


def test_parse_critic():
    v = parse_critic("Score: 0.8 | Justification: coherent progress")
    assert (v.score, v.justification) == (0.8, "coherent progress")
    v = parse_critic("Score: 1.7 | Justification: x")
    assert (v.score, v.justification) == (1.0, "x")
    with pytest.raises(ParseError):
        parse_critic("looks good")


@given(st.text(max_size=80))
def test_parse_critic_score_in_unit_interval(text):
    try:
        verdict = parse_critic(text)
    except ParseError:
        return
    assert 0.0 <= verdict.score <= 1.0


@given(st.floats(allow_nan=False, allow_infinity=False, min_value=-1e6, max_value=1e6))
def test_parse_critic_clamps_any_float(x):
    assert parse_critic(f"Score: {x!r} | Justification: j").score == min(1.0, max(0.0, x))


# -- usage -------------------------------------------------------------------------


def test_estimate_tokens_is_ceiling_of_quarter_length():
    assert [estimate_tokens("a" * n) for n in (0, 1, 4, 5, 8, 9)] == [0, 1, 1, 2, 2, 3]


@given(st.lists(st.tuples(st.text(max_size=50), st.text(max_size=50)), max_size=10))
def test_usage_is_additive(pairs):
    total = UsageCounters()
    for prompt, reply in pairs:
        total = total + heuristic_usage(prompt, reply)
    assert total.calls == len(pairs)
    assert total.prompt_tokens == sum(math.ceil(len(p) / 4) for p, _ in pairs)
    assert total.completion_tokens == sum(math.ceil(len(r) / 4) for _, r in pairs)


def test_usage_rejects_negative():
    with pytest.raises(ValueError):
        UsageCounters(-1, 0, 0)
