"""
Validation Module

First node of every experiment: checks that the configuration describes
something runnable and snapshots it next to the results.
"""

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.node import Node
from app.core.schema.task import RunContext
from app.harness.loader import write_experiment
from app.logging.factory import logger

EXPERIMENT_SNAPSHOT = "experiment.md"


class ValidateExperiment(Node):
    """Rejects unrunnable experiments before any run starts."""

    def process(self, run_context: RunContext) -> RunContext:
        config = run_context.config
        if len(set(config.seeds)) != len(config.seeds):
            raise ConfigurationError(ErrorMessages.invalid_config("seeds", "duplicate seeds"))
        if config.experiment.is_control and not config.variants():
            raise ConfigurationError(
                ErrorMessages.invalid_config(
                    "experiment", f"{config.experiment.value} has no variants"
                )
            )

        run_context.experiment_dir.mkdir(parents=True, exist_ok=True)
        snapshot = write_experiment(
            run_context.experiment_dir / EXPERIMENT_SNAPSHOT, config, run_context.notes
        )
        logger.info(
            "Validated %s: %d seeds, output %s",
            config.experiment.value,
            len(config.seeds),
            run_context.experiment_dir,
        )
        run_context.update_node(self.node_name, snapshot=str(snapshot))
        return run_context
