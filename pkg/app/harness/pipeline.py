"""
Pipeline Orchestrator Module

Orchestrates one experiment: validation, routing on the experiment kind,
execution and aggregation.
"""

from pathlib import Path

from app.core.pipeline import Pipeline
from app.core.schema.pipeline import NodeConfig, PipelineSchema
from app.core.schema.task import RunContext
from app.harness.config import ExperimentConfig, get_harness_settings
from app.harness.nodes.aggregate_results import AggregateResults
from app.harness.nodes.execute_seeds import ExecuteSeeds
from app.harness.nodes.oco_bench import OcoBench
from app.harness.nodes.route_experiment import RouteExperiment
from app.harness.nodes.simplified_equivalence import SimplifiedEquivalence
from app.harness.nodes.validate_experiment import ValidateExperiment
from app.logging.factory import logger
from app.worker.config import get_worker_config


class ExperimentPipeline(Pipeline):
    """Linear pipeline with one branch per experiment family."""

    pipeline_schema = PipelineSchema(
        description="Pipeline for executing one experiment",
        start=ValidateExperiment,
        nodes=[
            NodeConfig(
                node=ValidateExperiment,
                connections=[RouteExperiment],
                description="Reject unrunnable configurations and snapshot the experiment",
            ),
            NodeConfig(
                node=RouteExperiment,
                connections=[ExecuteSeeds, OcoBench, SimplifiedEquivalence],
                description="Pick the executor for the experiment kind",
                is_router=True,
            ),
            NodeConfig(
                node=ExecuteSeeds,
                connections=[AggregateResults],
                description="Lifelong-RL runs for every arm and seed",
            ),
            NodeConfig(
                node=OcoBench,
                connections=[AggregateResults],
                description="Regret comparisons on quadratic loss streams",
            ),
            NodeConfig(
                node=SimplifiedEquivalence,
                connections=[AggregateResults],
                description="Simplified recursion against its closed form",
            ),
            NodeConfig(
                node=AggregateResults,
                connections=[],  # End node
                description="Cross-seed tables",
            ),
        ],
    )


def run_experiment(
    config: ExperimentConfig,
    output_root: str | Path | None = None,
    workers: int | None = None,
    notes: str = "",
) -> RunContext:
    """Execute an experiment end to end.

    Failed runs do not stop the experiment; they are listed in
    `RunContext.failures` and persisted with status "failed".

    Args:
        config: Validated experiment configuration
        output_root: Defaults to TRAC_OUTPUT_ROOT
        workers: Defaults to TRAC_WORKERS
        notes: Stored with the experiment snapshot
    """
    run_context = RunContext(
        config=config,
        notes=notes,
        output_root=Path(output_root or get_harness_settings().output_root),
        workers=workers or get_worker_config().workers,
    )
    run_context = ExperimentPipeline().run(run_context)
    if run_context.failures:
        logger.warning(f"{len(run_context.failures)} runs failed")
    return run_context
