"""
Seed Execution Node

Runs every (variant, seed) pair of a control experiment on the worker pool
and records the failures as they arrive. Each worker persists its own run.
"""

from app.core.exceptions import ErrorMessages
from app.core.node import Node
from app.core.schema.record import RunRecord, RunStatus
from app.core.schema.task import RunContext
from app.logging.factory import logger
from app.worker.pool import SeedJob, run_seeds


class ExecuteSeeds(Node):
    """Lifelong-RL runs for every arm and seed."""

    def process(self, run_context: RunContext) -> RunContext:
        config = run_context.config
        jobs = [
            SeedJob(
                experiment=config.experiment.value,
                variant=variant,
                seed=seed,
                total_env_steps=config.total_env_steps,
                output_root=run_context.output_root,
            )
            for variant in config.variants()
            for seed in config.seeds
        ]
        logger.info("Executing %d runs", len(jobs))

        def note_failure(record: RunRecord) -> None:
            if record.status == RunStatus.FAILED:
                run_context.failures.append(
                    ErrorMessages.run_failed(record.run_id, record.error or "unknown")
                )

        records = run_seeds(jobs, workers=run_context.workers, on_record=note_failure)
        run_context.records.extend(records)

        completed = sum(record.status == RunStatus.COMPLETED for record in records)
        run_context.update_node(
            self.node_name, completed=completed, failed=len(records) - completed
        )
        return run_context
