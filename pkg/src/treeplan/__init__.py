"""Tool-use planning by Monte Carlo tree search with simulated observations
and critic-shaped rewards."""

from .backends import HttpBackend, HttpBackendConfig, OracleBackend, OracleConfig
from .bench.dataset import load_dataset
from .domain import Action, Observation, ParseError, PlanState, Task, ToolParam, ToolSpec, parse_action
from .engine import PlanResult, ablation_config, run_ablation, run_search, run_standard_mcts
from .tree import SearchConfig, extract_best_plan, shape_reward, uct_score

__all__ = [
    "Action",
    "HttpBackend",
    "HttpBackendConfig",
    "Observation",
    "OracleBackend",
    "OracleConfig",
    "ParseError",
    "PlanResult",
    "PlanState",
    "SearchConfig",
    "Task",
    "ToolParam",
    "ToolSpec",
    "ablation_config",
    "extract_best_plan",
    "load_dataset",
    "parse_action",
    "run_ablation",
    "run_search",
    "run_standard_mcts",
    "shape_reward",
    "uct_score",
]
__version__ = "0.1.0"
