"""
Routing Module

Routes an experiment to the node that executes its kind.
"""

from app.core.node import Node
from app.core.router import Router, RouterNode
from app.core.schema.task import RunContext
from app.harness.config import ExperimentKind
from app.harness.nodes.execute_seeds import ExecuteSeeds
from app.harness.nodes.oco_bench import OcoBench
from app.harness.nodes.simplified_equivalence import SimplifiedEquivalence


class RouteExperiment(Router):
    """Routes based on the experiment kind"""

    def __init__(self):
        super().__init__()
        self.routes = [ControlRouter, OcoBenchRouter, EquivalenceRouter]  # classes not instantiated
        self.fallback = None


class ControlRouter(RouterNode):
    """Lifelong-RL experiments run seeds on the worker pool"""

    def determine_next_node(self, run_context: RunContext) -> type[Node] | None:
        if run_context.config.experiment.is_control:
            return ExecuteSeeds
        return None


class OcoBenchRouter(RouterNode):
    def determine_next_node(self, run_context: RunContext) -> type[Node] | None:
        if run_context.config.experiment == ExperimentKind.OCO_BENCH:
            return OcoBench
        return None


class EquivalenceRouter(RouterNode):
    def determine_next_node(self, run_context: RunContext) -> type[Node] | None:
        if run_context.config.experiment == ExperimentKind.SIMPLIFIED_EQUIVALENCE:
            return SimplifiedEquivalence
        return None
