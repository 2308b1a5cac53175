"""
Aggregation Node

Last node of every experiment: cross-seed tables over the completed runs.
"""

from app.core.node import Node
from app.core.schema.record import RunStatus
from app.core.schema.task import RunContext
from app.harness.aggregate import write_aggregate
from app.logging.factory import logger


class AggregateResults(Node):
    """Writes aggregate.csv into the experiment directory."""

    def process(self, run_context: RunContext) -> RunContext:
        if not any(record.status == RunStatus.COMPLETED for record in run_context.records):
            logger.warning("No completed runs; skipping aggregation")
            run_context.update_node(self.node_name, paths=[])
            return run_context

        paths = write_aggregate(run_context.experiment_dir, run_context.records)
        for path in paths:
            logger.info("Wrote %s", path)
        run_context.update_node(self.node_name, paths=[str(path) for path in paths])
        return run_context
