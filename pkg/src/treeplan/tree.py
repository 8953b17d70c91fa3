"""Search tree: node arena, UCT selection, reward shaping and backpropagation."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace

from .domain import Action, PlanState, ToolSpec

INF = math.inf


class DomainError(ValueError):
    """Reward inputs outside [0, 1]."""


class ConfigError(ValueError):
    pass


@dataclass
class SearchConfig:
    budget: int = 50
    exploration: float = 1.5
    alpha: float = 0.5
    max_depth: int = 10
    r_terminal: float = 0.0
    # Planner samples drawn at a node before selection descends past it.
    expansion_width: int = 3
    # re-selected Finish nodes backpropagate their stored reward instead of r_terminal
    finish_revisit_stored: bool = True
    use_simulator: bool = True
    use_critic: bool = True
    use_planner_persona: bool = True
    uniform_rewards: bool = False
    standard_rollout: bool = False
    uniform_value: float = 0.5
    graph_hints: bool = False

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.budget < 1:
            raise ConfigError("budget must be >= 1")
        if self.max_depth < 1:
            raise ConfigError("max_depth must be >= 1")
        if self.expansion_width < 1:
            raise ConfigError("expansion_width must be >= 1")
        if self.exploration < 0:
            raise ConfigError("exploration constant must be >= 0")
        if self.standard_rollout and self.use_critic:
            raise ConfigError("standard_rollout replaces the critic; set use_critic=False")

    def with_(self, **changes) -> SearchConfig:
        return replace(self, **changes)


@dataclass
class SearchNode:
    id: int
    parent: int | None
    state: PlanState
    incoming_action: Action | None
    depth: int
    terminal: bool = False
    value: float = 0.0
    visits: int = 0
    children: list[int] = field(default_factory=list)
    # Reward this node received when it was created; replayed on duplicate proposals.
    reward: float | None = None
    expansions: int = 0

    @property
    def mean(self) -> float:
        return self.value / self.visits if self.visits else 0.0


class SearchTree:
    """Nodes live in a list and refer to each other by index."""

    def __init__(self, root_state: PlanState | None = None, max_depth: int = 10) -> None:
        self.max_depth = max_depth
        root = SearchNode(0, None, root_state or PlanState(), None, depth=0)
        root.terminal = root.state.is_terminal
        self.nodes: list[SearchNode] = [root]

    @property
    def root(self) -> SearchNode:
        return self.nodes[0]

    def __getitem__(self, node_id: int) -> SearchNode:
        return self.nodes[node_id]

    def __len__(self) -> int:
        return len(self.nodes)

    def add_child(self, parent: SearchNode, action: Action, state: PlanState) -> SearchNode:
        depth = parent.depth + 1
        child = SearchNode(
            len(self.nodes),
            parent.id,
            state,
            action,
            depth,
            terminal=state.is_terminal or depth >= self.max_depth,
        )
        self.nodes.append(child)
        parent.children.append(child.id)
        return child

    def children(self, node: SearchNode) -> list[SearchNode]:
        return [self.nodes[i] for i in node.children]

    def find_child(self, node: SearchNode, action: Action) -> SearchNode | None:
        text = action.render()
        for child in self.children(node):
            if child.incoming_action is not None and child.incoming_action.render() == text:
                return child
        return None

    def path_to(self, node: SearchNode) -> list[SearchNode]:
        path = [node]
        while path[-1].parent is not None:
            path.append(self.nodes[path[-1].parent])
        return path[::-1]

    def snapshot(self) -> list[dict]:
        return [
            {
                "id": n.id,
                "parent": n.parent,
                "action": n.incoming_action.render() if n.incoming_action else None,
                "depth": n.depth,
                "terminal": n.terminal,
                "value": n.value,
                "visits": n.visits,
                "children": list(n.children),
            }
            for n in self.nodes
        ]


def uct_score(child: SearchNode, parent: SearchNode, c: float) -> float:
    """Mean value plus exploration bonus; unvisited children score +inf."""
    if child.visits == 0:
        return INF
    if parent.visits < 1:
        raise ValueError("parent must have been visited")
    return child.value / child.visits + c * math.sqrt(math.log(parent.visits) / child.visits)


def is_frontier(node: SearchNode, expansion_width: int = 1) -> bool:
    """True where selection stops: terminal, childless, or still being expanded."""
    # every child came from an expansion, so the child count bounds the expansion count
    return node.terminal or not node.children or max(node.expansions, len(node.children)) < expansion_width


def select_leaf(tree: SearchTree, c: float, expansion_width: int = 1) -> SearchNode:
    """Descend by max UCT from the root until a frontier node.

    With ``expansion_width=1`` this stops exactly at the first childless node.
    Ties go to the earliest-created child.
    """
    node = tree.root
    while not is_frontier(node, expansion_width):
        best, best_score = None, -INF
        for child in tree.children(node):
            score = uct_score(child, node, c)
            if best is None or score > best_score:
                best, best_score = child, score
        node = best
    return node


def shape_reward(r_base: float, rho_ref: float, alpha: float) -> float:
    for name, x in (("r_base", r_base), ("rho_ref", rho_ref), ("alpha", alpha)):
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"{name}={x} outside [0, 1]")
    return alpha * r_base + (1.0 - alpha) * rho_ref


def _type_ok(value, declared: str) -> bool:
    if declared == "string":
        return isinstance(value, str)
    if declared == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if declared == "boolean":
        return isinstance(value, bool)
    return isinstance(value, (dict, list))


def base_reward(action: Action, catalog: Sequence[ToolSpec]) -> float:
    """Validity heuristic: 1.0 well-formed call or finish, 0.5 bad params, 0.0 unknown tool.

    Arguments the tool does not declare count as mistyped.
    """
    if action.is_finish:
        return 1.0
    spec = next((t for t in catalog if t.name == action.tool), None)
    if spec is None:
        return 0.0
    args = action.arg_map
    declared = {p.name: p for p in spec.params}
    for name in spec.required:
        if name not in args:
            return 0.5
    for name, value in args.items():
        param = declared.get(name)
        if param is None or not _type_ok(value, param.type):
            return 0.5
    return 1.0


RewardRubric = Callable[[Action, Sequence[ToolSpec]], float]


def backpropagate(tree: SearchTree, node: SearchNode, reward: float) -> None:
    current: SearchNode | None = node
    while current is not None:
        current.visits += 1
        current.value += reward
        current = tree[current.parent] if current.parent is not None else None


def _best_by_mean(children: list[SearchNode]) -> SearchNode | None:
    best = None
    for child in children:
        if child.visits == 0:
            continue
        if best is None or child.mean > best.mean or (
            child.mean == best.mean and child.visits > best.visits
        ):
            best = child
    return best


def best_path(tree: SearchTree) -> list[SearchNode]:
    """Greedy descent by mean value (ties: more visits, then earliest)."""
    path = [tree.root]
    node = tree.root
    while not node.terminal:
        nxt = _best_by_mean(tree.children(node))
        if nxt is None:
            break
        path.append(nxt)
        node = nxt
    return path


def extract_best_plan(tree: SearchTree) -> list[Action]:
    return [n.incoming_action for n in best_path(tree)[1:]]
