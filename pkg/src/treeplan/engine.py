"""The search loop: select, expand with the Planner, ground with the Simulator,
score with the Critic, backpropagate. Also the random-rollout baseline and the
ablation dispatcher."""

from __future__ import annotations

import json
import logging
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .domain import Action, Observation, ParseError, PlanState, Task, append_step, parse_action
from .protocol import (
    DEFAULT_SAMPLING,
    AgentBackend,
    AgentRole,
    BackendError,
    SamplingParams,
    UsageCounters,
    build_critic_prompt,
    build_planner_prompt,
    build_simulator_prompt,
    parse_critic,
    parse_observation,
)
from .tree import (
    ConfigError,
    RewardRubric,
    SearchConfig,
    SearchNode,
    SearchTree,
    backpropagate,
    base_reward,
    extract_best_plan,
    select_leaf,
    shape_reward,
)

log = logging.getLogger(__name__)

PLACEHOLDER_OBSERVATION = Observation('"ok"')
UNPARSED_OBSERVATION = Observation("<unparsed>")
NO_CRITIC_SCORE = 0.5


@dataclass
class PlanResult:
    plan: list[Action]
    iterations_used: int
    usage: dict[AgentRole, UsageCounters]
    diagnostics: list[dict[str, Any]] = field(default_factory=list)
    trace_path: Path | None = None
    tree: SearchTree | None = field(default=None, repr=False)

    @property
    def total_usage(self) -> UsageCounters:
        total = UsageCounters()
        for counters in self.usage.values():
            total = total + counters
        return total


class _Search:
    def __init__(
        self,
        task: Task,
        backend: AgentBackend,
        config: SearchConfig,
        seed: int,
        sampling: Mapping[AgentRole, SamplingParams] | None,
        rubric: RewardRubric,
        trace_path: Path | None,
    ) -> None:
        config.validate()
        self.task = task
        self.backend = backend
        self.config = config
        self.seed = seed
        self.sampling = {**DEFAULT_SAMPLING, **(sampling or {})}
        self.rubric = rubric
        self.trace_path = Path(trace_path) if trace_path else None
        self.tree = SearchTree(max_depth=config.max_depth)
        self.usage = {role: UsageCounters() for role in AgentRole}
        self.diagnostics: list[dict[str, Any]] = []
        self.trace: list[dict[str, Any]] = []
        self.rng = random.Random(seed)

    # -- backend access ----------------------------------------------------------

    def _call(self, role: AgentRole, prompt: str) -> str:
        for attempt in (1, 2):
            try:
                text, usage = self.backend.complete(role, prompt, self.sampling[role])
            except BackendError as exc:
                self.diagnostics.append(
                    {"event": "backend_error", "role": role.value, "attempt": attempt, "error": str(exc)}
                )
                if attempt == 2:
                    exc.diagnostics = list(self.diagnostics)
                    raise
                continue
            self.usage[role] = self.usage[role] + usage
            return text
        raise AssertionError("unreachable")

    def _propose(self, node: SearchNode) -> Action | None:
        prompt = build_planner_prompt(
            self.task,
            node.state,
            persona=self.config.use_planner_persona,
            graph_hints=self.config.graph_hints,
        )
        for attempt in (1, 2):
            text = self._call(AgentRole.PLANNER, prompt)
            try:
                return parse_action(text)
            except ParseError as exc:
                self.diagnostics.append(
                    {"event": "planner_unparseable", "attempt": attempt, "node": node.id, "raw": exc.raw[:200]}
                )
        return None

    def _observe(self, action: Action) -> Observation:
        if not self.config.use_simulator:
            return PLACEHOLDER_OBSERVATION
        prompt = build_simulator_prompt(self.task, action.render())
        for attempt in (1, 2):
            text = self._call(AgentRole.SIMULATOR, prompt)
            try:
                return parse_observation(text)
            except ParseError as exc:
                self.diagnostics.append(
                    {"event": "observation_unparseable", "attempt": attempt, "raw": exc.raw[:200]}
                )
        return UNPARSED_OBSERVATION

    def _reflect(self, state: PlanState) -> float:
        if not self.config.use_critic:
            return NO_CRITIC_SCORE
        text = self._call(AgentRole.CRITIC, build_critic_prompt(self.task, state))
        try:
            return parse_critic(text).score
        except ParseError as exc:
            self.diagnostics.append({"event": "critic_unparseable", "flagged": True, "raw": exc.raw[:200]})
            return 0.0

    # -- search ----------------------------------------------------------------------

    @property
    def dead_end_reward(self) -> float:
        if self.config.uniform_rewards:
            return self.config.uniform_value
        return self.config.r_terminal

    def run(self, evaluate) -> PlanResult:
        cfg = self.config
        for it in range(1, cfg.budget + 1):
            leaf = select_leaf(self.tree, cfg.exploration, cfg.expansion_width)
            if leaf.terminal or leaf.depth >= cfg.max_depth:
                if cfg.finish_revisit_stored and leaf.reward is not None and leaf.state.is_terminal:
                    backpropagate(self.tree, leaf, leaf.reward)
                    self._record(it, leaf, "finish_revisit", leaf, None, None, leaf.reward)
                else:
                    backpropagate(self.tree, leaf, self.dead_end_reward)
                    self._record(it, leaf, "dead_end", leaf, None, None, self.dead_end_reward)
                continue
            leaf.expansions += 1
            action = self._propose(leaf)
            if action is None:
                backpropagate(self.tree, leaf, self.dead_end_reward)
                self._record(it, leaf, "planner_failed", leaf, None, None, self.dead_end_reward)
                continue
            existing = self.tree.find_child(leaf, action)
            if existing is not None:
                backpropagate(self.tree, existing, existing.reward)
                self._record(it, leaf, "duplicate", existing, None, None, existing.reward)
                continue
            if action.is_finish:
                state = append_step(leaf.state, action)
            else:
                state = append_step(leaf.state, action, self._observe(action))
            child = self.tree.add_child(leaf, action, state)
            r_base, rho, reward, extra = evaluate(child)
            child.reward = reward
            backpropagate(self.tree, child, reward)
            self._record(it, leaf, "expand", child, r_base, rho, reward, **extra)
        if self.trace_path is not None:
            self._write_trace()
        return PlanResult(
            plan=extract_best_plan(self.tree),
            iterations_used=cfg.budget,
            usage=dict(self.usage),
            diagnostics=self.diagnostics,
            trace_path=self.trace_path,
            tree=self.tree,
        )

    def shaped(self, child: SearchNode) -> tuple[float, float, float, dict]:
        r_base = self.rubric(child.incoming_action, self.task.catalog)
        rho = self._reflect(child.state)
        if self.config.uniform_rewards:
            reward = self.config.uniform_value
        else:
            reward = shape_reward(r_base, rho, self.config.alpha)
        return r_base, rho, reward, {}

    def rollout(self, child: SearchNode) -> tuple[float, None, float, dict]:
        state = child.state
        last = child.incoming_action
        depth = child.depth
        names: list[str] = []
        while not state.is_terminal and depth < self.config.max_depth:
            last = self._random_action()
            names.append(last.tool or "finish")
            state = append_step(state, last, None if last.is_finish else PLACEHOLDER_OBSERVATION)
            depth += 1
        value = self.rubric(last, self.task.catalog)
        return value, None, value, {"rollout": names}

    def _random_action(self) -> Action:
        choice = self.rng.randrange(len(self.task.catalog) + 1)
        if choice == len(self.task.catalog):
            return Action.finish("rollout end")
        tool = self.task.catalog[choice]
        return Action.call(tool.name, {p.name: _placeholder(p.type) for p in tool.params if p.required})

    def _record(self, it, selected, event, node, r_base, rho, reward, **extra) -> None:
        row = {
            "iter": it,
            "selected_node": selected.id,
            "event": event,
            "node": node.id,
            "parent": node.parent,
            "action": node.incoming_action.render() if node.incoming_action else None,
            "r_base": r_base,
            "rho_ref": rho,
            "R_t": reward,
        }
        row.update(extra)
        self.trace.append(row)

    def _write_trace(self) -> None:
        self.trace_path.parent.mkdir(parents=True, exist_ok=True)
        with self.trace_path.open("w", encoding="utf-8") as fh:
            for row in self.trace:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def _placeholder(kind: str) -> Any:
    return {"string": "value", "number": 0, "boolean": False, "object": {}}[kind]


def run_search(
    task: Task,
    backend: AgentBackend,
    config: SearchConfig | None = None,
    seed: int = 0,
    *,
    sampling: Mapping[AgentRole, SamplingParams] | None = None,
    rubric: RewardRubric = base_reward,
    trace_path: Path | str | None = None,
) -> PlanResult:
    """Plan ``task`` with Critic-shaped rewards and Simulator-grounded expansions."""
    config = config or SearchConfig()
    if config.standard_rollout:
        return run_standard_mcts(task, backend, config, seed, sampling=sampling, rubric=rubric, trace_path=trace_path)
    search = _Search(task, backend, config, seed, sampling, rubric, trace_path)
    return search.run(search.shaped)


def run_standard_mcts(
    task: Task,
    backend: AgentBackend,
    config: SearchConfig | None = None,
    seed: int = 0,
    *,
    sampling: Mapping[AgentRole, SamplingParams] | None = None,
    rubric: RewardRubric = base_reward,
    trace_path: Path | str | None = None,
) -> PlanResult:
    """Baseline: same selection and Planner expansion, but each new node is
    valued by a seeded random rollout instead of Simulator + Critic."""
    config = (config or SearchConfig(use_critic=False, standard_rollout=True)).with_(
        standard_rollout=True, use_critic=False, use_simulator=False
    )
    search = _Search(task, backend, config, seed, sampling, rubric, trace_path)
    return search.run(search.rollout)


ABLATIONS: dict[str, dict[str, bool]] = {
    "no_planner": {"use_planner_persona": False},
    "no_simulator": {"use_simulator": False},
    "no_critic": {"use_critic": False},
    "uniform_rewards": {"uniform_rewards": True},
    "standard_mcts": {"standard_rollout": True, "use_critic": False},
}
ABLATION_ALIASES = {"no_validator": "no_critic", "no_persona": "no_planner"}

_MODE_FLAGS = ("use_planner_persona", "use_simulator", "use_critic", "uniform_rewards", "standard_rollout")
_MODE_DEFAULTS = {f: getattr(SearchConfig(), f) for f in _MODE_FLAGS}


def ablation_config(name: str, base: SearchConfig | None = None) -> SearchConfig:
    name = ABLATION_ALIASES.get(name, name)
    if name not in ABLATIONS:
        raise ConfigError(f"unknown ablation {name!r}; choose from {sorted(ABLATIONS)}")
    return (base or SearchConfig()).with_(**{**_MODE_DEFAULTS, **ABLATIONS[name]})


def ablation_name(config: SearchConfig) -> str | None:
    """Name of the ablation ``config`` represents; None for the full method."""
    changed = {f: getattr(config, f) for f in _MODE_FLAGS if getattr(config, f) != _MODE_DEFAULTS[f]}
    if not changed:
        return None
    for name, flags in ABLATIONS.items():
        if changed == flags:
            return name
    raise ConfigError(f"unsupported ablation flag combination: {changed}")


def run_ablation(
    task: Task,
    backend: AgentBackend,
    config: SearchConfig,
    seed: int = 0,
    **kwargs,
) -> PlanResult:
    name = ablation_name(config)
    if name == "standard_mcts":
        return run_standard_mcts(task, backend, config, seed, **kwargs)
    return run_search(task, backend, config, seed, **kwargs)
