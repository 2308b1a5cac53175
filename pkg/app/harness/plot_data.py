"""
Plot Data Module

Tidy CSV series for external plotting tools:

    reward_curve   seed mean/std of the per-update mean episode reward
    scaling_trace  seed mean/std of S at every optimizer step
    lambda_bars    seed mean/std of cumulative reward per sweep value
"""

from collections import defaultdict
from enum import Enum
from pathlib import Path

from app.core.exceptions import MissingSeriesError
from app.core.schema.record import RunRecord
from app.harness.aggregate import group_records, mean_std
from app.harness.storage import Column, write_csv


class PlotKind(str, Enum):
    """Plot series that can be emitted"""

    REWARD_CURVE = "reward_curve"
    SCALING_TRACE = "scaling_trace"
    LAMBDA_BARS = "lambda_bars"


PLOT_COLUMNS: dict[PlotKind, list[Column]] = {
    PlotKind.REWARD_CURVE: [
        Column(name="variant", description="Arm or sweep value"),
        Column(name="update", description="1-based update index"),
        Column(name="env_step", description="Environment step at the end of the update"),
        Column(name="mean_reward", description="Seed mean of the update's mean episode reward"),
        Column(name="std_reward", description="Standard deviation across seeds"),
        Column(name="n", description="Seeds contributing"),
    ],
    PlotKind.SCALING_TRACE: [
        Column(name="variant", description="Arm or sweep value"),
        Column(name="step", description="1-based optimizer step"),
        Column(name="mean_S", description="Seed mean of the scaling S"),
        Column(name="std_S", description="Standard deviation of S across seeds"),
    ],
    PlotKind.LAMBDA_BARS: [
        Column(name="variant", description="Sweep variant"),
        Column(name="value", description="Swept value"),
        Column(name="mean_reward", description="Seed mean of the cumulative mean episode reward"),
        Column(name="std_reward", description="Standard deviation across seeds"),
        Column(name="n", description="Seeds contributing"),
    ],
}


def _series_rows(records: list[RunRecord], attribute: str, key: str, value: str) -> list[list]:
    """Cross-seed mean/std of `value` indexed by `key` within each variant."""
    rows = []
    for (_, variant), members in group_records(records).items():
        by_key: dict[int, list[float]] = defaultdict(list)
        extra: dict[int, int] = {}
        for record in members:
            for item in getattr(record, attribute):
                by_key[getattr(item, key)].append(getattr(item, value))
                extra.setdefault(getattr(item, key), getattr(item, "env_step", 0))
        for index in sorted(by_key):
            mean, std = mean_std(by_key[index])
            rows.append([variant, index, extra[index], mean, std, len(by_key[index])])
    return rows


def reward_curve(records: list[RunRecord]) -> list[list]:
    rows = _series_rows(records, "updates", "update", "mean_episode_reward")
    if not rows:
        raise MissingSeriesError("No per-update reward rows in the records")
    return rows


def scaling_trace(records: list[RunRecord]) -> list[list]:
    rows = _series_rows(records, "scaling", "step", "S")
    if not rows:
        raise MissingSeriesError("No scaling trace in the records (TRAC-family runs only)")
    return [[variant, step, mean, std] for variant, step, _, mean, std, _ in rows]


def lambda_bars(records: list[RunRecord]) -> list[list]:
    rows = []
    for (_, variant), members in group_records(records).items():
        if "=" not in variant:
            continue
        mean, std = mean_std([r.summary.cumulative_mean_episode_reward for r in members])
        rows.append([variant, float(variant.split("=", 1)[1]), mean, std, len(members)])
    if not rows:
        raise MissingSeriesError("No sweep variants (name=value) in the records")
    return sorted(rows, key=lambda row: (row[0].split("=")[0], row[1]))


def emit_plot_data(records: list[RunRecord], kind: PlotKind | str, out: str | Path) -> Path:
    """Write the requested series as a documented CSV.

    Raises:
        MissingSeriesError: If the records do not contain the series
    """
    kind = PlotKind(kind)
    builders = {
        PlotKind.REWARD_CURVE: reward_curve,
        PlotKind.SCALING_TRACE: scaling_trace,
        PlotKind.LAMBDA_BARS: lambda_bars,
    }
    rows = builders[kind](records)
    columns = PLOT_COLUMNS[kind]
    return write_csv(
        Path(out),
        [column.name for column in columns],
        rows,
        f"Plot data: {kind.value}",
        columns,
    )
