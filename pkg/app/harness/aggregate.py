"""
Aggregation Module

Cross-seed summary tables computed purely from run records, so they can be
rebuilt offline from the persisted run directories. Spread is the
standard deviation over the seeds (divisor n); a single seed has spread 0.
"""

from collections import defaultdict
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from app.core.exceptions import ExperimentError
from app.core.schema.record import RunRecord, RunStatus
from app.harness.storage import Column, write_csv

IMPROVEMENT_FORMULA = (
    "improvement(A over B) = (R_A - R_B) / |R_B|, R = seed-mean headline metric, "
    "averaged over environments (one environment here)"
)
BASELINE_VARIANT = "adam"

AGGREGATE_FILE = "aggregate.csv"
BEST_VARIANT_FILE = "best_variant_per_task.csv"


class AggregateRow(BaseModel):
    """Seed statistics of one (experiment, variant) group."""

    experiment: str
    variant: str
    n_runs: int
    metric: str
    mean: float
    std: float
    mean_post_first_shift: float | None = None
    mean_at_task_starts: float | None = None
    mean_first_update: float | None = None
    final_mean_S: float | None = None
    improvement_vs_baseline: float | None = None


AGGREGATE_COLUMNS = [
    Column(name="experiment", description="Experiment kind"),
    Column(name="variant", description="Arm or sweep value"),
    Column(name="n_runs", description="Completed seeds in the group"),
    Column(name="metric", description="Headline metric the mean/std refer to"),
    Column(name="mean", description="Seed mean of the headline metric"),
    Column(name="std", description="Standard deviation across seeds, divisor n (0 for one seed)"),
    Column(
        name="mean_post_first_shift",
        description="Seed mean of mean episode reward after the first shift",
    ),
    Column(
        name="mean_at_task_starts",
        description="Seed mean of the reward of the first update in each new task",
    ),
    Column(
        name="mean_first_update",
        description="Seed mean of the first update's reward (fresh agent)",
    ),
    Column(name="final_mean_S", description="Seed mean of the run-final mean scaling S"),
    Column(
        name="improvement_vs_baseline",
        description=f"Normalized improvement over the '{BASELINE_VARIANT}' group",
    ),
]


def headline(record: RunRecord) -> tuple[str, float]:
    """The metric a record is ranked by."""
    if record.oco:
        return "regret", record.oco[-1].regret_to_date
    if record.equivalence:
        return "max_relative_residual", max(row.residual for row in record.equivalence)
    return "cumulative_mean_episode_reward", record.summary.cumulative_mean_episode_reward


def mean_std(values: list[float]) -> tuple[float, float]:
    """Mean and population standard deviation."""
    array = np.asarray(values, dtype=np.float64)
    std = float(array.std()) if array.size > 1 else 0.0
    return float(array.mean()), std


def normalized_improvement(reward_a: float, reward_b: float) -> float:
    """(R_A - R_B) / |R_B|."""
    if reward_b == 0:
        raise ExperimentError("Normalized improvement undefined for a zero baseline")
    return (reward_a - reward_b) / abs(reward_b)


def _optional_mean(values: list[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def group_records(records: list[RunRecord]) -> dict[tuple[str, str], list[RunRecord]]:
    groups: dict[tuple[str, str], list[RunRecord]] = defaultdict(list)
    for record in records:
        if record.status == RunStatus.COMPLETED:
            groups[(record.experiment, record.variant)].append(record)
    return dict(sorted(groups.items()))


def aggregate(records: list[RunRecord]) -> list[AggregateRow]:
    """Per-group mean and std of the headline metric, plus improvement over the baseline.

    Raises:
        ExperimentError: If there is no completed record
    """
    groups = group_records(records)
    if not groups:
        raise ExperimentError("No completed run records to aggregate")

    rows = []
    for (experiment, variant), members in groups.items():
        metric = headline(members[0])[0]
        mean, std = mean_std([headline(record)[1] for record in members])
        rows.append(
            AggregateRow(
                experiment=experiment,
                variant=variant,
                n_runs=len(members),
                metric=metric,
                mean=mean,
                std=std,
                mean_post_first_shift=_optional_mean(
                    [r.summary.mean_reward_post_first_shift for r in members]
                ),
                mean_at_task_starts=_optional_mean(
                    [r.summary.mean_reward_at_task_starts for r in members]
                ),
                mean_first_update=_optional_mean(
                    [r.summary.mean_reward_first_update for r in members]
                ),
                final_mean_S=_optional_mean([r.summary.final_mean_S for r in members]),
            )
        )

    baseline = next(
        (
            row
            for row in rows
            if row.variant == BASELINE_VARIANT and row.metric == "cumulative_mean_episode_reward"
        ),
        None,
    )
    if baseline is not None and baseline.mean != 0:
        for row in rows:
            if row.metric == baseline.metric:
                row.improvement_vs_baseline = normalized_improvement(row.mean, baseline.mean)
    return rows


class BestVariantRow(BaseModel):
    """Best sweep value for one task."""

    experiment: str
    task_index: int
    best_variant: str
    mean_reward: float


def best_variant_per_task(records: list[RunRecord]) -> list[BestVariantRow]:
    """For every sweep experiment and task, the variant with the highest seed-mean task reward."""
    by_task: dict[tuple[str, int], dict[str, list[float]]] = defaultdict(lambda: defaultdict(list))
    for (experiment, variant), members in group_records(records).items():
        for record in members:
            for task, reward in record.summary.mean_reward_per_task.items():
                by_task[(experiment, task)][variant].append(reward)

    rows = []
    for (experiment, task), per_variant in sorted(by_task.items()):
        if len(per_variant) < 2:
            continue
        means = {variant: float(np.mean(values)) for variant, values in per_variant.items()}
        best = max(sorted(means), key=means.__getitem__)
        rows.append(
            BestVariantRow(
                experiment=experiment, task_index=task, best_variant=best, mean_reward=means[best]
            )
        )
    return rows


def write_aggregate(directory: str | Path, records: list[RunRecord]) -> list[Path]:
    """Write aggregate.csv (and the best-variant table when a sweep is present)."""
    directory = Path(directory)
    rows = aggregate(records)
    header = [column.name for column in AGGREGATE_COLUMNS]
    paths = [
        write_csv(
            directory / AGGREGATE_FILE,
            header,
            [[getattr(row, name) for name in header] for row in rows],
            "Cross-seed aggregate",
            AGGREGATE_COLUMNS,
            notes=[IMPROVEMENT_FORMULA],
        )
    ]

    best_rows = best_variant_per_task(records)
    if best_rows:
        best_header = list(BestVariantRow.model_fields)
        paths.append(
            write_csv(
                directory / BEST_VARIANT_FILE,
                best_header,
                [[getattr(row, name) for name in best_header] for row in best_rows],
                "Best sweep value per task (highest seed-mean reward within the task)",
                [Column(name=name, description=name.replace("_", " ")) for name in best_header],
            )
        )
    return paths
