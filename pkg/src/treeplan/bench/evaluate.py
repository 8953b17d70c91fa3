"""Judging a predicted plan against a task's gold plan."""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from enum import Enum

from ..domain import Action, Task, normalize_args


class MatchPolicy(str, Enum):
    # same tool multiset, dependency-respecting order, normalized args, ends in finish
    MULTISET = "multiset"
    # gold order exactly, normalized args, ends in finish
    EXACT = "exact"


def evaluate_plan(
    predicted: Sequence[Action], task: Task, policy: MatchPolicy | str = MatchPolicy.MULTISET
) -> bool:
    """True when ``predicted`` solves ``task`` under ``policy``."""
    policy = MatchPolicy(policy)
    if not predicted or not predicted[-1].is_finish:
        return False
    if any(a.is_finish for a in predicted[:-1]):
        return False
    calls = list(predicted[:-1])
    gold = task.gold_plan
    if len(calls) != len(gold):
        return False

    if policy is MatchPolicy.EXACT:
        return all(
            c.tool == g.tool and normalize_args(c.arg_map) == normalize_args(g.arg_map)
            for c, g in zip(calls, gold)
        )

    if Counter(c.tool for c in calls) != Counter(g.tool for g in gold):
        return False
    gold_norm = [normalize_args(g.arg_map) for g in gold]
    position: dict[int, int] = {}
    for pos, call in enumerate(calls):
        norm = normalize_args(call.arg_map)
        slot = next(
            (i for i, g in enumerate(gold) if i not in position and g.tool == call.tool and gold_norm[i] == norm),
            None,
        )
        if slot is None:
            return False
        position[slot] = pos
    return all(position[a] < position[b] for a, b in task.gold_edges)
