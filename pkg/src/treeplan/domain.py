"""Tasks, tools, actions and plan states.

Everything here is an immutable value object. Actions have one canonical
text form (``api_call("name", {...})`` / ``finish(reason="...")``) which is
what prompts show, what the tree uses for duplicate detection, and what
``parse_action`` reads back.
"""

from __future__ import annotations

import ast
import json
import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Any

PARAM_TYPES = ("string", "number", "boolean", "object")


class ParseError(ValueError):
    """Raised when agent output does not match the expected grammar.

    ``raw`` keeps the offending text for diagnostics.
    """

    def __init__(self, message: str, raw: str = "") -> None:
        super().__init__(message)
        self.raw = raw


class AlreadyTerminal(ValueError):
    """Raised when appending to a plan that already ends in ``finish``."""


class TaskError(ValueError):
    """Raised when a task or tool catalog violates its invariants."""


@dataclass(frozen=True)
class ToolParam:
    name: str
    type: str = "string"
    required: bool = True

    def __post_init__(self) -> None:
        if not self.name:
            raise TaskError("parameter name must be non-empty")
        if self.type not in PARAM_TYPES:
            raise TaskError(f"parameter {self.name!r}: unknown type {self.type!r}")


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str = ""
    params: tuple[ToolParam, ...] = ()

    def __post_init__(self) -> None:
        if not self.name:
            raise TaskError("tool name must be non-empty")
        names = [p.name for p in self.params]
        if len(names) != len(set(names)):
            raise TaskError(f"tool {self.name!r}: duplicate parameter names")

    @property
    def required(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params if p.required)


class ActionKind(str, Enum):
    API_CALL = "api_call"
    FINISH = "finish"


@dataclass(frozen=True)
class Action:
    """A parsed planner step: a tool call or the terminal ``finish``.

    ``args`` is stored as a tuple of pairs so the object stays hashable and
    keeps insertion order; use :attr:`arg_map` for dict access.
    """

    kind: ActionKind
    tool: str | None = None
    args: tuple[tuple[str, Any], ...] = ()
    reason: str | None = None

    def __post_init__(self) -> None:
        if self.kind is ActionKind.API_CALL:
            if not self.tool or self.reason is not None:
                raise ValueError("api_call needs a tool name and no reason")
            for key, value in self.args:
                _check_literal(value, depth=0, where=key)
        else:
            if self.tool is not None or self.args or self.reason is None:
                raise ValueError("finish needs a reason and no tool/args")

    @classmethod
    def call(cls, tool: str, args: Mapping[str, Any] | None = None) -> Action:
        items = tuple((k, _freeze(v)) for k, v in (args or {}).items())
        return cls(ActionKind.API_CALL, tool=tool, args=items)

    @classmethod
    def finish(cls, reason: str) -> Action:
        return cls(ActionKind.FINISH, reason=reason)

    @property
    def is_finish(self) -> bool:
        return self.kind is ActionKind.FINISH

    @property
    def arg_map(self) -> dict[str, Any]:
        return {k: _thaw(v) for k, v in self.args}

    def render(self) -> str:
        """Canonical single-line text of this action."""
        if self.is_finish:
            return f"finish(reason={_dumps(self.reason)})"
        return f"api_call({_dumps(self.tool)}, {_dumps(self.arg_map)})"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Observation:
    value: str

    def __post_init__(self) -> None:
        if "\n" in self.value or "\r" in self.value:
            raise ValueError("observation value must be a single line")

    def render(self) -> str:
        return f"Observation: tool_output = {self.value}"


@dataclass(frozen=True)
class Step:
    action: Action
    observation: Observation | None = None


@dataclass(frozen=True)
class PlanState:
    steps: tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def is_terminal(self) -> bool:
        return bool(self.steps) and self.steps[-1].action.is_finish

    @property
    def actions(self) -> tuple[Action, ...]:
        return tuple(s.action for s in self.steps)


def append_step(
    state: PlanState, action: Action, obs: Observation | None = None
) -> PlanState:
    """Return ``state`` extended by one step; ``state`` itself is untouched."""
    if state.is_terminal:
        raise AlreadyTerminal("plan already ends in finish")
    if state.steps and state.steps[-1].observation is None:
        raise ValueError("previous api_call step has no observation")
    if action.is_finish and obs is not None:
        raise ValueError("finish steps carry no observation")
    return PlanState(state.steps + (Step(action, obs),))


def render_history(state: PlanState) -> str:
    if not state.steps:
        return "(empty plan)"
    lines = []
    for step in state.steps:
        lines.append(step.action.render())
        if step.observation is not None:
            lines.append(step.observation.render())
    return "\n".join(lines)


# -- tasks -------------------------------------------------------------------


@dataclass(frozen=True)
class GoldStep:
    tool: str
    args: tuple[tuple[str, Any], ...] = ()
    # Expected tool output; later steps may consume it verbatim as an argument.
    output: str | None = None

    @classmethod
    def of(cls, tool: str, args: Mapping[str, Any] | None = None, output: str | None = None) -> GoldStep:
        return cls(tool, tuple((k, _freeze(v)) for k, v in (args or {}).items()), output)

    @property
    def arg_map(self) -> dict[str, Any]:
        return {k: _thaw(v) for k, v in self.args}

    def as_action(self) -> Action:
        return Action(ActionKind.API_CALL, tool=self.tool, args=self.args)


@dataclass(frozen=True)
class Task:
    id: str
    instruction: str
    catalog: tuple[ToolSpec, ...]
    gold_plan: tuple[GoldStep, ...]
    gold_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        names = [t.name for t in self.catalog]
        if len(names) != len(set(names)):
            raise TaskError(f"task {self.id}: duplicate tool names in catalog")
        known = set(names)
        for i, step in enumerate(self.gold_plan):
            if step.tool not in known:
                raise TaskError(f"task {self.id}: gold step {i} uses unknown tool {step.tool!r}")
        n = len(self.gold_plan)
        for a, b in self.gold_edges:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise TaskError(f"task {self.id}: bad gold edge ({a}, {b})")
        if not _is_dag(n, self.gold_edges):
            raise TaskError(f"task {self.id}: gold_edges contain a cycle")

    @property
    def complexity(self) -> str:
        return "simple" if len(self.gold_plan) == 1 else "complex"

    def tool(self, name: str) -> ToolSpec | None:
        for spec in self.catalog:
            if spec.name == name:
                return spec
        return None

    def gold_outputs(self) -> list[str]:
        """Per-step expected outputs, with a stable default when unset."""
        return [
            s.output if s.output is not None else f"{_slug(s.tool)}_result_{i + 1}"
            for i, s in enumerate(self.gold_plan)
        ]


def _is_dag(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        out[a].append(b)
        indeg[b] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        for j in out[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return seen == n


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_") or "tool"


def normalize_value(value: Any) -> str:
    if isinstance(value, str):
        return value.strip()
    if isinstance(value, dict):
        inner = ",".join(f"{k.strip().casefold()}={normalize_value(v)}" for k, v in sorted(value.items()))
        return "{" + inner + "}"
    if isinstance(value, list):
        return "[" + ",".join(normalize_value(v) for v in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value)


def normalize_args(args: dict[str, Any]) -> dict[str, str]:
    return {k.strip().casefold(): normalize_value(v) for k, v in args.items()}


# -- literal handling ----------------------------------------------------------


def _dumps(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, allow_nan=False)


def _freeze(value: Any) -> Any:
    if isinstance(value, Mapping):
        return tuple((k, _freeze(v)) for k, v in value.items())
    if isinstance(value, list):
        return ("__list__",) + tuple(_freeze(v) for v in value)
    return value


def _thaw(value: Any) -> Any:
    if isinstance(value, tuple):
        if value[:1] == ("__list__",):
            return [_thaw(v) for v in value[1:]]
        return {k: _thaw(v) for k, v in value}
    return value


def _is_scalar(value: Any) -> bool:
    if isinstance(value, float):
        return math.isfinite(value)
    return isinstance(value, (str, int, bool))


def _check_literal(value: Any, depth: int, where: str) -> None:
    # scalars anywhere; lists of scalars; objects nested at most one level
    if _is_scalar(value):
        return
    if isinstance(value, tuple) and value[:1] == ("__list__",):
        if not all(_is_scalar(v) for v in value[1:]):
            raise ValueError(f"argument {where!r}: lists may hold scalars only")
        return
    if isinstance(value, tuple) and depth == 0:
        for key, inner in value:
            if not isinstance(key, str):
                raise ValueError(f"argument {where!r}: object keys must be strings")
            _check_literal(inner, depth + 1, f"{where}.{key}")
        return
    raise ValueError(f"argument {where!r}: unsupported or too deeply nested value")


# -- parsing -------------------------------------------------------------------

_FENCE = re.compile(r"^\s*```[\w-]*\s*$")
# only real line breaks; str.splitlines would also split on U+2028 and friends,
# which canonical renderings leave unescaped inside strings
_LINE_BREAK = re.compile(r"\r\n|\r|\n")
_ACTION_START = re.compile(r"\b(api_call|finish)\s*\(")
_TRAILING_COMMENT = re.compile(r"\)\s*(//|#).*$")
_NAMED_CONSTANTS = {"true": True, "false": False, "True": True, "False": False}


def split_lines(text: str) -> list[str]:
    return _LINE_BREAK.split(text)


def strip_fences(text: str) -> str:
    """Drop markdown code-fence lines and surrounding whitespace."""
    lines = [ln for ln in _LINE_BREAK.split(text.strip()) if not _FENCE.match(ln)]
    return "\n".join(lines).strip()


def action_candidates(text: str) -> list[str]:
    """Substrings of ``text`` that start an ``api_call(``/``finish(`` form."""
    found = []
    for line in _LINE_BREAK.split(strip_fences(text)):
        m = _ACTION_START.search(line)
        if m is None:
            continue
        cand = line[m.start():].strip().strip("`").strip()
        found.append(_TRAILING_COMMENT.sub(")", cand))
    return found


def parse_action(text: str) -> Action:
    """Parse planner output into an :class:`Action`.

    Accepts ``api_call("<name>", {<args>})`` and ``finish(reason="...")``,
    with either quote style, after stripping code fences and any preamble
    lines. The first candidate line that parses wins.
    """
    candidates = action_candidates(text)
    if not candidates:
        raise ParseError("no api_call(...) or finish(...) found", raw=text)
    last_error = "unparseable"
    for cand in candidates:
        try:
            return _parse_one(cand)
        except ParseError as exc:
            last_error = str(exc)
    raise ParseError(last_error, raw=text)


def _parse_one(src: str) -> Action:
    try:
        node = ast.parse(src, mode="eval").body
    except (SyntaxError, ValueError, RecursionError, MemoryError) as exc:
        raise ParseError(f"not a call expression: {exc.__class__.__name__}", raw=src) from None
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ParseError("not a call expression", raw=src)
    name = node.func.id
    if name == "api_call":
        if len(node.args) != 2 or node.keywords:
            raise ParseError("api_call takes (name, {args})", raw=src)
        tool = _literal(node.args[0], src)
        args = _literal(node.args[1], src)
        if not isinstance(tool, str) or not tool:
            raise ParseError("tool name must be a non-empty string", raw=src)
        if not isinstance(args, dict):
            raise ParseError("api_call arguments must be an object", raw=src)
        try:
            return Action.call(tool, args)
        except ValueError as exc:
            raise ParseError(str(exc), raw=src) from None
    if name == "finish":
        if node.keywords and not node.args and len(node.keywords) == 1 and node.keywords[0].arg == "reason":
            reason = _literal(node.keywords[0].value, src)
        elif len(node.args) == 1 and not node.keywords:
            reason = _literal(node.args[0], src)
        else:
            raise ParseError("finish takes a single reason", raw=src)
        if not isinstance(reason, str):
            raise ParseError("finish reason must be a string", raw=src)
        return Action.finish(reason)
    raise ParseError(f"unknown call {name!r}", raw=src)


def _literal(node: ast.AST, src: str) -> Any:
    if isinstance(node, ast.Constant):
        if node.value is None or isinstance(node.value, (bytes, complex)) or node.value is Ellipsis:
            raise ParseError("unsupported literal", raw=src)
        if isinstance(node.value, float) and not math.isfinite(node.value):
            raise ParseError("non-finite number", raw=src)
        return node.value
    if isinstance(node, ast.Name) and node.id in _NAMED_CONSTANTS:
        return _NAMED_CONSTANTS[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _literal(node.operand, src)
        if isinstance(inner, bool) or not isinstance(inner, (int, float)):
            raise ParseError("sign applied to non-number", raw=src)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.Dict):
        out: dict[str, Any] = {}
        for k, v in zip(node.keys, node.values):
            if k is None:
                raise ParseError("dict unpacking not allowed", raw=src)
            key = _literal(k, src)
            if not isinstance(key, str):
                raise ParseError("argument names must be strings", raw=src)
            out[key] = _literal(v, src)
        return out
    if isinstance(node, ast.List):
        return [_literal(v, src) for v in node.elts]
    raise ParseError(f"unsupported expression {node.__class__.__name__}", raw=src)
