"""
Node Module

This module defines the foundational Node class that all experiment pipeline
nodes inherit from. Nodes form a chain of responsibility: each one receives
the run context, performs its step of the experiment and hands the updated
context to the next node in the chain.
"""

from abc import ABC, abstractmethod

from app.core.schema.task import RunContext


class Node(ABC):
    """Abstract base class for all pipeline processing nodes.

    Each concrete node is one step of an experiment: validating the
    configuration, executing seeds, running a benchmark or aggregating the
    stored runs. The pipeline instantiates the node, calls process() and then
    moves to the next configured node.

    The process() method is where a node:
    1. Receives the run context from the previous node
    2. Performs its step (training runs, files written, aggregates built)
    3. Returns the context for the next node

    Attributes:
        node_name: Auto-generated name based on the class name
    """

    @property
    def node_name(self) -> str:
        """Gets the name of the node.

        Returns:
            String name derived from the class name
        """
        return self.__class__.__name__

    @abstractmethod
    def process(self, run_context: RunContext) -> RunContext:
        """Processes the run context.

        Args:
            run_context: The shared context object passed through the pipeline

        Returns:
            Updated RunContext with this node's results

        Note:
            Implementations should:
            1. Append the RunRecords they produce to run_context.records
            2. Store summary results using run_context.update_node(self.node_name, **results)
        """
        pass
