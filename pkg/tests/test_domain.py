from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeplan.domain import (
    Action,
    AlreadyTerminal,
    GoldStep,
    Observation,
    ParseError,
    PlanState,
    Task,
    TaskError,
    ToolParam,
    ToolSpec,
    append_step,
    normalize_args,
    parse_action,
    render_history,
)

from .conftest import CATALOG


def test_parse_banking_call():
    line = 'api_call("online_banking", {"instruction": "transfer $1000 to friend\'s account", "bank": "Chase bank"})'
    action = parse_action(line)
    assert action.tool == "online_banking"
    assert action.arg_map == {"instruction": "transfer $1000 to friend's account", "bank": "Chase bank"}


def test_parse_finish_keyword_and_positional():
    assert parse_action('finish(reason="All tasks completed successfully...")') == Action.finish(
        "All tasks completed successfully..."
    )
    assert parse_action("finish('done')") == Action.finish("done")


def test_prose_is_rejected():
    with pytest.raises(ParseError):
        parse_action("I think we should call a tool")


def test_fences_and_preamble_are_stripped():
    text = 'Sure, here is the next step:\n```python\napi_call("set_alarm", {"time": "7:00 AM"})\n```'
    assert parse_action(text) == Action.call("set_alarm", {"time": "7:00 AM"})


def test_json_style_booleans_and_numbers():
    action = parse_action('api_call("t", {"flag": true, "off": false, "n": -3, "x": 2.5})')
    assert action.arg_map == {"flag": True, "off": False, "n": -3, "x": 2.5}


def test_one_level_of_nesting_only():
    ok = parse_action('api_call("Image Editing", {"edits": {"highlight": ["Red Delicious"]}})')
    assert ok.arg_map["edits"] == {"highlight": ["Red Delicious"]}
    with pytest.raises(ParseError):
        parse_action('api_call("t", {"a": {"b": {"c": 1}}})')


@pytest.mark.parametrize(
    "line",
    [
        "finish([])",
        'api_call("t", {...})',
        'api_call("t")',
        'api_call("", {})',
        'api_call("t", {"a": None})',
        'api_call("t", {**x})',
        'api_call("t", {1: "a"})',
        'finish(reason=1)',
        'finish(reason="a", extra="b")',
        'api_call("t", {"a": float("nan")})',
        'api_call("t", {"a": 1e999})',
        'other_call("t", {})',
    ],
)
def test_malformed_lines_raise_parse_error(line):
    with pytest.raises(ParseError) as info:
        parse_action(line)
    assert info.value.raw


def test_render_uses_double_quotes_and_insertion_order():
    action = Action.call("t", {"b": "x", "a": 1})
    assert action.render() == 'api_call("t", {"b": "x", "a": 1})'


def test_action_kind_invariants():
    with pytest.raises(ValueError):
        Action.finish(None)  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        Action.call("")


def test_observation_is_single_line():
    with pytest.raises(ValueError):
        Observation("a\nb")


def test_append_step_value_semantics():
    empty = PlanState()
    one = append_step(empty, Action.call("search", {"query": "q"}), Observation('"hits"'))
    assert len(empty) == 0 and len(one) == 1
    two = append_step(one, Action.call("summarize", {"text": "hits"}), Observation('"s"'))
    done = append_step(two, Action.finish("ok"))
    assert len(done) == 3 and done.is_terminal
    with pytest.raises(AlreadyTerminal):
        append_step(done, Action.call("search", {"query": "q"}), Observation('"x"'))


def test_render_history():
    assert render_history(PlanState()) == "(empty plan)"
    state = append_step(PlanState(), Action.call("search", {"query": "q"}), Observation('"hits"'))
    lines = render_history(state).splitlines()
    assert len(lines) == 2
    assert lines[1].startswith("Observation: tool_output = ")
    assert parse_action(lines[0]) == state.steps[0].action


def test_task_validation():
    with pytest.raises(TaskError):
        Task("x", "i", CATALOG, (GoldStep.of("nope"),))
    with pytest.raises(TaskError):
        Task("x", "i", CATALOG, (GoldStep.of("search"), GoldStep.of("summarize")), ((0, 1), (1, 0)))
    with pytest.raises(TaskError):
        ToolSpec("t", "", (ToolParam("a"), ToolParam("a")))
    with pytest.raises(TaskError):
        ToolParam("a", "datetime")


def test_complexity_and_default_outputs(pipe, simple):
    assert simple.complexity == "simple"
    assert pipe.complexity == "complex"
    assert pipe.gold_outputs() == ["search_hits", "summary_txt", "send_email_result_3"]


def test_normalize_args_trims_and_casefolds_keys():
    assert normalize_args({" Bank ": " Chase bank "}) == normalize_args({"bank": "Chase bank"})
    assert normalize_args({"n": 1}) == normalize_args({"n": 1})
    assert normalize_args({"b": "x"}) != normalize_args({"b": "X"})


# -- round trip ------------------------------------------------------------------

_text = st.text(st.characters(blacklist_categories=("Cs",)), max_size=20)
_scalar = st.one_of(
    _text,
    st.integers(-10**6, 10**6),
    st.booleans(),
    st.floats(allow_nan=False, allow_infinity=False, width=32),
)
_value = st.one_of(
    _scalar,
    st.lists(_scalar, max_size=3),
    st.dictionaries(st.text(min_size=1, max_size=5), st.one_of(_scalar, st.lists(_scalar, max_size=2)), max_size=3),
)
_actions = st.one_of(
    st.builds(Action.finish, _text),
    st.builds(
        Action.call,
        st.text(min_size=1, max_size=15).filter(lambda s: s.strip() and "\n" not in s and "\r" not in s),
        st.dictionaries(st.text(min_size=1, max_size=8), _value, max_size=4),
    ),
)


@given(_actions)
def test_render_parse_round_trip(action):
    assert parse_action(action.render()) == action
