"""
Router Module

This module implements the routing logic for experiment pipelines. It
provides the base classes that decide which node runs next, so one pipeline
can dispatch every experiment kind (lifelong control runs, sweeps, the OCO
bench, the simplified-recursion check) from a single declared structure.
"""

from abc import ABC, abstractmethod

from app.core.node import Node
from app.core.schema.task import RunContext


class RouterNode(ABC):
    """Base interface for router condition nodes"""

    @abstractmethod
    def determine_next_node(self, run_context: RunContext) -> type[Node] | None:
        """Return the next node if this rule applies, else None"""
        pass

    @property
    def node_name(self):
        """Returns the name of the node"""
        return self.__class__.__name__


class Router(Node):
    """Base router implementation that manages multiple routing rules.

    The Router directs the run context to the node that handles the
    configured experiment. Rules are evaluated in sequence; when none of
    them names a node, the fallback is used.

    Attributes:
        routes: List of RouterNode classes defining routing rules
        fallback: Optional default node to route to if no rules match
    """

    def __init__(self):
        self.routes: list[type[RouterNode]] = []  # Rule classes
        self.fallback: type[Node] | None = None  # Node class

    def process(self, run_context: RunContext) -> RunContext:
        """Processes the routing logic and records the decision.

        Args:
            run_context: Current experiment run context

        Returns:
            Updated RunContext with the chosen node's name under this router
        """
        next_node_class = self.route(run_context)
        run_context.update_node(
            self.node_name,
            next_node=next_node_class.__name__ if next_node_class else None,
        )
        return run_context

    def route(self, run_context: RunContext) -> type[Node] | None:
        """Determines the next node from the routing rules.

        Args:
            run_context: Current experiment run context

        Returns:
            The first node a rule names, else the fallback (None ends the pipeline)
        """
        for router_class in self.routes:
            rule = router_class()
            next_node_class = rule.determine_next_node(run_context)
            if next_node_class:
                return next_node_class
        return self.fallback
