"""
Pipeline Module

This module implements the core pipeline functionality: a series of nodes
executed in order from a declared start node, with router nodes choosing the
branch, and every node wrapped in logging and error reporting.
"""

from abc import ABC
from contextlib import contextmanager
from typing import ClassVar

from app.core.exceptions import ConfigurationError
from app.core.node import Node
from app.core.router import Router
from app.core.schema.pipeline import NodeConfig, PipelineSchema
from app.core.schema.task import RunContext
from app.logging.config import HARNESS
from app.logging.factory import log_scope, logger


class Pipeline(ABC):
    """Abstract base class for experiment pipelines.

    Attributes:
        pipeline_schema: Class variable defining the pipeline's structure and flow
        nodes: Dictionary mapping node classes to their configuration
    """

    pipeline_schema: ClassVar[PipelineSchema]

    def __init__(self):
        """Initializes pipeline nodes"""
        self.nodes: dict[type[Node], NodeConfig] = {}
        self._initialize_nodes()

    def _initialize_nodes(self) -> None:
        """Register every declared node and every node it connects to."""
        for node_config in self.pipeline_schema.nodes:
            self.nodes[node_config.node] = node_config
            for connected_node in node_config.connections:
                if connected_node not in self.nodes:
                    self.nodes[connected_node] = NodeConfig(node=connected_node)

    @contextmanager
    def node_context(self, node_name: str):
        """Log node start and completion; log and re-raise failures.

        Args:
            node_name: Name of the node being executed
        """
        logger.info(f"Starting node: {node_name}")
        try:
            yield
        except Exception as e:
            logger.error(f"Error in node {node_name}: {e}")
            raise
        finally:
            logger.info(f"Completed node: {node_name}")

    def run(self, run_context: RunContext) -> RunContext:
        """Executes the pipeline on a prepared run context.

        Args:
            run_context: Context holding the configuration and output location

        Returns:
            The context with every node's results
        """
        experiment = run_context.config.experiment.value
        current_node_class: type[Node] | None = self.pipeline_schema.start
        with log_scope(service=HARNESS):
            logger.info(f"Starting pipeline for experiment {experiment}")
            while current_node_class:
                node_config = self.nodes[current_node_class]
                current_node = node_config.node()
                with self.node_context(current_node_class.__name__):
                    run_context = current_node.process(run_context)
                current_node_class = self._get_next_node_class(current_node_class, run_context)
            logger.info(f"Completed pipeline for experiment {experiment}")
        return run_context

    def _get_next_node_class(
        self, current_node_class: type[Node], run_context: RunContext
    ) -> type[Node] | None:
        """The next node to execute, or None at the end of the chain."""
        node_config = self.nodes.get(current_node_class)
        if not node_config or not node_config.connections:
            return None

        if node_config.is_router:
            router: Router = node_config.node()  # type: ignore
            next_node_class = router.route(run_context)
            if next_node_class and next_node_class not in node_config.connections:
                raise ConfigurationError(
                    f"{current_node_class.__name__} routed to undeclared node "
                    f"{next_node_class.__name__}"
                )
            return next_node_class

        return node_config.connections[0]
