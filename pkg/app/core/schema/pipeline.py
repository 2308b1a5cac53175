"""
Pipeline Schema Module

Declarative structure of an experiment pipeline: which nodes exist, where
execution starts and which node may follow which. The structure is checked
once, when the pipeline class body is evaluated.
"""

from pydantic import BaseModel, Field, model_validator

from app.core.node import Node


class NodeConfig(BaseModel):
    """One node of a pipeline and the nodes it may hand over to.

    Attributes:
        node: The Node class to be instantiated
        connections: Successors; a plain node follows the first, a router picks one
        is_router: The node is a Router and chooses among its connections
        description: What the node does in this pipeline
    """

    node: type[Node]
    connections: list[type[Node]] = Field(default_factory=list)
    is_router: bool = False
    description: str | None = None

    @model_validator(mode="after")
    def _check_connections(self) -> "NodeConfig":
        if self.is_router and not self.connections:
            raise ValueError(f"router {self.node.__name__} has no connections")
        if not self.is_router and len(self.connections) > 1:
            raise ValueError(f"{self.node.__name__} has several successors but is not a router")
        return self


class PipelineSchema(BaseModel):
    """Complete pipeline structure.

    Example:
        schema = PipelineSchema(
            start=ValidateExperiment,
            nodes=[
                NodeConfig(node=ValidateExperiment, connections=[RouteExperiment]),
                NodeConfig(node=RouteExperiment, connections=[ExecuteSeeds], is_router=True),
            ],
        )
    """

    description: str | None = None
    start: type[Node]
    nodes: list[NodeConfig]

    @model_validator(mode="after")
    def _check_start(self) -> "PipelineSchema":
        declared = [config.node for config in self.nodes]
        if self.start not in declared:
            raise ValueError(f"start node {self.start.__name__} is not declared")
        if len(set(declared)) != len(declared):
            raise ValueError("a node is declared twice")
        return self
