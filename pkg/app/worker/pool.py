"""
Seed Execution Module

Runs (variant, seed) jobs of a control experiment, in-process or on a
process pool. A failing job never takes the others down: it comes back as a
FAILED RunRecord carrying the error, and every completed record is returned.
"""

import multiprocessing
import traceback
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

from pydantic import BaseModel

from app.core.exceptions import ErrorMessages
from app.core.schema.record import RunRecord, RunStatus
from app.harness.config import Variant
from app.harness.storage import write_run
from app.logging.config import WORKER, LogConfig
from app.logging.factory import get_active_log_config, log_scope, logger, setup_service_logger
from app.ppo.trainer import lifelong_train
from app.worker.config import get_worker_config


class SeedJob(BaseModel):
    """One lifelong-RL run to execute."""

    experiment: str
    variant: Variant
    seed: int
    total_env_steps: int
    output_root: Path | None = None

    @property
    def run_id(self) -> str:
        return f"{self.experiment}/{self.variant.name}/seed-{self.seed}"


def run_seed(job: SeedJob) -> RunRecord:
    """Execute one job, turning any exception into a FAILED record.

    With `output_root` set the record is persisted by the process that ran it.
    """
    with log_scope(run=job.run_id):
        record = _train(job)
        if job.output_root is not None:
            write_run(job.output_root, record)
    return record


def _train(job: SeedJob) -> RunRecord:
    try:
        return lifelong_train(
            job.variant.training,
            job.variant.optimizer_kind,
            job.total_env_steps,
            job.seed,
            experiment=job.experiment,
            variant=job.variant.name,
        )
    except Exception as e:
        logger.error(ErrorMessages.run_failed(job.run_id, repr(e)))
        logger.debug(traceback.format_exc())
        return RunRecord(
            experiment=job.experiment,
            variant=job.variant.name,
            seed=job.seed,
            status=RunStatus.FAILED,
            error=f"{type(e).__name__}: {e}",
        )


def _worker_init(config: LogConfig) -> None:
    setup_service_logger(WORKER, config)


def run_seeds(
    jobs: Iterable[SeedJob],
    workers: int | None = None,
    on_record: Callable[[RunRecord], None] | None = None,
) -> list[RunRecord]:
    """Execute every job and return the records sorted by (variant, seed).

    Args:
        jobs: Jobs to execute
        workers: Pool size; 1 runs in the calling process, None uses TRAC_WORKERS
        on_record: Called in the parent process as each record arrives
    """
    jobs = list(jobs)
    config = get_worker_config()
    workers = workers or config.workers
    records: list[RunRecord] = []

    def collect(record: RunRecord) -> None:
        records.append(record)
        if on_record is not None:
            on_record(record)

    if workers == 1 or len(jobs) <= 1:
        for job in jobs:
            collect(run_seed(job))
    else:
        context = multiprocessing.get_context(config.start_method)
        logger.info(f"Dispatching {len(jobs)} runs to {workers} workers ({config.start_method})")
        with ProcessPoolExecutor(
            max_workers=min(workers, len(jobs)),
            mp_context=context,
            initializer=_worker_init,
            initargs=(get_active_log_config(),),
            max_tasks_per_child=config.max_tasks_per_child,
        ) as executor:
            futures = {executor.submit(run_seed, job): job for job in jobs}
            for future in as_completed(futures):
                collect(future.result())

    return sorted(records, key=lambda record: (record.variant, record.seed))
