"""
Run Context Schema Module

This module defines the Pydantic schema for the context shared across the
experiment pipeline nodes. It carries the validated configuration, the
records produced so far, failures, and per-node results.
"""

from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from app.core.schema.record import RunRecord
from app.harness.config import ExperimentConfig


class RunContext(BaseModel):
    """Context container for one experiment execution.

    Attributes:
        config: The validated experiment configuration
        notes: Free-text notes from the experiment file
        output_root: Directory that receives the run directories
        workers: Seed-level worker processes (1 runs in-process)
        records: Run records produced so far, including failed runs
        failures: One message per failed run
        nodes: Results recorded by each node
        metadata: Pipeline-level metadata

    Example:
        run_context = RunContext(config=config, output_root=Path("runs"))
        run_context.update_node("ExecuteSeeds", completed=25, failed=0)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: ExperimentConfig
    notes: str = ""
    output_root: Path
    workers: int = Field(default=1, ge=1)
    records: list[RunRecord] = Field(default_factory=list)
    failures: list[str] = Field(default_factory=list)
    nodes: dict[str, Any] = Field(
        default_factory=dict,
        description="Results and status from each node's execution",
    )
    metadata: dict[str, Any] = Field(default_factory=dict, description="Pipeline configuration")

    @property
    def experiment_dir(self) -> Path:
        return self.output_root / self.config.experiment.value

    @property
    def succeeded(self) -> bool:
        return not self.failures

    def update_node(self, node_name: str, **kwargs: Any) -> None:
        """Merge key-value pairs into a node's results, creating the entry if needed."""
        self.nodes[node_name] = {**self.nodes.get(node_name, {}), **kwargs}
