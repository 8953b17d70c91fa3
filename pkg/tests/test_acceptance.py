"""Acceptance suite: one test per release criterion.

Run alone with ``pytest tests/test_acceptance.py -v`` for a pass/fail line per criterion.
"""

from __future__ import annotations

import math
import os
import random
import statistics
import string
import time

import pytest

from treeplan.backends import HttpBackend, HttpBackendConfig, OracleBackend, OracleConfig
from treeplan.bench.cot import run_cot
from treeplan.bench.dataset import load_dataset, sample_split
from treeplan.bench.evaluate import evaluate_plan
from treeplan.bench.experiment import ExperimentConfig, run_experiment
from treeplan.bench.metrics import RunRecord, build_residual, compute_metrics
from treeplan.domain import Action, ParseError, parse_action
from treeplan.engine import ablation_config, run_ablation, run_search, run_standard_mcts
from treeplan.protocol import UsageCounters, parse_critic, parse_observation
from treeplan.tree import SearchConfig, SearchNode, SearchTree, extract_best_plan, shape_reward, uct_score

from .conftest import pipeline_task
from .treegen import build, oracle_best_path, random_shape, shapes

SEEDS = (42, 101, 1234, 2024, 12345)


def test_ac1_tree_statistics_invariant():
    task = pipeline_task()
    assert len(task.catalog) == 5
    for k in (10, 25, 50):
        backend = OracleBackend([task], OracleConfig(planner_error_rate=0.3, critic_fidelity=0.7, rng_seed=k))
        started = time.perf_counter()
        result = run_search(task, backend, SearchConfig(budget=k), seed=k)
        elapsed = time.perf_counter() - started
        tree = result.tree
        assert tree.root.visits == k
        for node in tree.nodes:
            assert node.visits >= sum(c.visits for c in tree.children(node))
        assert elapsed < 5.0


def _uct_reference(v: float, c: int, cp: int, C: float) -> float:
    return v / c + C * (math.log(cp) / c) ** 0.5


def test_ac2_reward_and_uct_arithmetic():
    rng = random.Random(2024)
    for i in range(1000):
        c = rng.randint(1, 500)
        cp = rng.randint(c, 5000)
        v = rng.uniform(0, c)
        C = rng.uniform(0, 3)
        parent = SearchNode(0, None, None, None, 0, visits=cp)
        child = SearchNode(1, 0, None, None, 1, value=v, visits=c)
        assert abs(uct_score(child, parent, C) - _uct_reference(v, c, cp, C)) <= 1e-12

        r, rho = rng.random(), rng.random()
        alpha = (0.0, 0.5, 1.0)[i % 3] if i < 300 else rng.random()
        expected = alpha * r + (1 - alpha) * rho
        assert abs(shape_reward(r, rho, alpha) - expected) <= 1e-12
    assert shape_reward(0.3, 0.8, 1.0) == 0.3
    assert shape_reward(0.3, 0.8, 0.0) == 0.8
    assert abs(shape_reward(0.3, 0.8, 0.5) - 0.55) <= 1e-12
    unvisited = SearchNode(2, 0, None, None, 1)
    assert uct_score(unvisited, SearchNode(0, None, None, None, 0, visits=1), 1.5) == math.inf


@pytest.mark.parametrize("dataset", ["daily_life", "ml_pipeline"])
def test_ac3_oracle_convergence(dataset):
    _, tasks = load_dataset(dataset)
    lengths = [len(t.gold_plan) for t in tasks]
    assert len(tasks) >= 20 and min(lengths) == 1 and max(lengths) == 8
    cfg = SearchConfig(budget=50, exploration=1.5, alpha=0.5)
    for task in tasks:
        result = run_search(task, OracleBackend(tasks), cfg, seed=42)
        gold = [s.as_action().render() for s in task.gold_plan]
        got = [a.render() for a in result.plan]
        assert got[:-1] == gold and result.plan[-1].is_finish, task.id
        assert evaluate_plan(result.plan, task), task.id


def _trap_success(method: str, seed: int, tasks) -> float:
    backend = OracleBackend(tasks, OracleConfig(planner_error_rate=0.3, rng_seed=seed))
    wins = 0
    for task in tasks:
        if method == "full":
            result = run_search(task, backend, SearchConfig(), seed)
        elif method == "mcts_50":
            result = run_standard_mcts(task, backend, ablation_config("standard_mcts"), seed)
        else:
            result = run_ablation(task, backend, ablation_config(method), seed)
        wins += evaluate_plan(result.plan, task)
    return wins / len(tasks)


def test_ac4_ablation_direction():
    _, tasks = load_dataset("trap_suite")
    assert len(tasks) == 30
    rates = {m: [_trap_success(m, s, tasks) for s in SEEDS]
             for m in ("full", "uniform_rewards", "no_simulator", "mcts_50")}
    full = rates["full"]
    for other in ("uniform_rewards", "no_simulator", "mcts_50"):
        assert statistics.fmean(full) > statistics.fmean(rates[other]), (other, rates)
        wins = sum(f > o for f, o in zip(full, rates[other]))
        assert wins >= 4, (other, rates)


def test_ac5_cascaded_protocol_and_determinism(tmp_path):
    _, tasks = load_dataset("daily_life")
    pool = sample_split(tasks, 42)
    backend = OracleBackend(tasks, OracleConfig(planner_error_rate=0.3, rng_seed=42))
    records = []
    for task in pool:
        ok = evaluate_plan(run_cot(task, backend, k=1, seed=42).plan, task)
        records.append(RunRecord(task.id, "cot_1", [], "success" if ok else "failure", task.complexity,
                                 UsageCounters(), 42))
    failed = [r.task_id for r in records if not r.success]
    assert failed, "the screen should fail some tasks at this error rate"
    assert [t.id for t in build_residual(records, pool)] == failed

    def run(workers: int, name: str) -> bytes:
        cfg = ExperimentConfig(dataset="daily_life", methods=["search", "cot:3", "mcts:10"], seeds=[42, 101],
                               residual=True, search={"budget": 20}, workers=workers, figures=False,
                               backend={"kind": "scripted", "planner_error_rate": 0.3})
        run_experiment(cfg, tmp_path / name)
        return (tmp_path / name / "records.jsonl").read_bytes()

    first = run(1, "a")
    assert first == run(1, "b") == run(4, "c")


def test_ac6_metrics_arithmetic():
    # (complexity, success, prompt tokens, completion tokens, calls)
    rows = [
        ("simple", True, 1000, 200, 3), ("simple", False, 800, 100, 2), ("simple", True, 500, 500, 1),
        ("simple", True, 1200, 300, 4), ("complex", False, 3000, 600, 9), ("complex", True, 2500, 400, 7),
        ("complex", False, 4000, 1000, 12), ("complex", True, 2200, 300, 6), ("complex", True, 1800, 200, 5),
        ("complex", False, 900, 100, 2),
    ]
    records = [RunRecord(f"t{i}", "m", [], "success" if ok else "failure", cx, UsageCounters(p, c, n), 7)
               for i, (cx, ok, p, c, n) in enumerate(rows)]
    report = compute_metrics(records)
    # hand tally: simple 3/4, complex 3/6, overall 6/10, tokens 21600, calls 51
    assert abs(report.simple_acc - 75.0) <= 1e-9
    assert abs(report.complex_acc - 50.0) <= 1e-9
    assert abs(report.overall_acc - 60.0) <= 1e-9
    assert report.total_tokens == 21600 and report.total_calls == 51
    # success per 10,000 tokens: 100 * 6 / 2.16
    assert abs(report.token_efficiency - 277.77777777777777) <= 1e-9
    assert abs(report.call_efficiency - 600 / 51) <= 1e-9


def _fuzz_lines(n: int) -> list[str]:
    rng = random.Random(7)
    stems = ['api_call("x", {', 'api_call(', 'finish(', 'api_call("x", {"a": })', 'api_call(x, {})',
             'finish(reason=)', 'api_call("x", {"a": [1, 2}', 'api_call("x", {"a": foo()})', '{...}', ')(']
    lines: dict[str, None] = {}
    while len(lines) < n:
        base = rng.choice(stems)
        noise = "".join(rng.choice(string.printable) for _ in range(rng.randint(1, 12)))
        lines[base + noise.replace(")", "") if len(lines) % 2 else noise + base] = None
    return list(lines)


def test_ac7_parser_conformance(case_lines):
    for entry in case_lines["actions"]:
        expected = entry["expected"]
        if "error" in expected:
            with pytest.raises(ParseError):
                parse_action(entry["line"])
            continue
        action = parse_action(entry["line"])
        assert action.kind.value == expected["kind"], entry["line"]
        if expected["kind"] == "finish":
            assert action.reason == expected["reason"]
        else:
            assert action.tool == expected["tool"] and action.arg_map == expected["args"], entry["line"]
    for entry in case_lines["observations"]:
        if entry["expected"] is None:
            with pytest.raises(ParseError):
                parse_observation(entry["line"])
        else:
            assert parse_observation(entry["line"]).value == entry["expected"]
    for entry in case_lines["critic"]:
        if entry["expected"] is None:
            with pytest.raises(ParseError):
                parse_critic(entry["line"])
        else:
            verdict = parse_critic(entry["line"])
            assert verdict.score == pytest.approx(entry["expected"]["score"])
            assert verdict.justification == entry["expected"]["justification"]

    fuzzed = _fuzz_lines(100)
    assert len(set(fuzzed)) == 100
    for line in fuzzed:
        with pytest.raises(ParseError):
            parse_action(line)
        for parser in (parse_observation, parse_critic):
            try:
                parser(line)
            except ParseError:
                pass


def test_ac8_best_path_brute_force():
    rng = random.Random(12345)
    trees: list[SearchTree] = []
    for shape in shapes(2, 3):
        trees.extend(build(shape, rng) for _ in range(10))
    while len(trees) < 3000:
        trees.append(build(random_shape(rng, 3, 3), rng))
    mismatches = 0
    for tree in trees:
        expected = [tree[i].incoming_action for i in oracle_best_path(tree)[1:]]
        mismatches += extract_best_plan(tree) != expected
    assert len(trees) == 3000 and mismatches == 0


@pytest.mark.live
@pytest.mark.skipif(not os.environ.get("TREEPLAN_LIVE_ENDPOINT"), reason="set TREEPLAN_LIVE_ENDPOINT to run")
def test_ac9_live_smoke():
    from .conftest import simple_task

    config = HttpBackendConfig(endpoint=os.environ["TREEPLAN_LIVE_ENDPOINT"],
                               model=os.environ.get("TREEPLAN_LIVE_MODEL", "default"))
    backend = HttpBackend(config)
    try:
        result = run_search(simple_task(), backend, SearchConfig(budget=5), seed=42)
    finally:
        backend.close()
    assert result.plan
    assert result.total_usage.calls > 0 and result.total_usage.total_tokens > 0
    assert isinstance(result.plan[0], Action)
