import pytest

from app.core.exceptions import MissingSeriesError
from app.core.schema.record import RunRecord, RunStatus, RunSummary, ScalingRow, UpdateRow
from app.harness.plot_data import PlotKind, emit_plot_data, lambda_bars, reward_curve, scaling_trace
from app.harness.storage import read_csv


def run(variant, seed, rewards, scales=(), cumulative=0.0) -> RunRecord:
    return RunRecord(
        experiment="trac",
        variant=variant,
        seed=seed,
        status=RunStatus.COMPLETED,
        updates=[
            UpdateRow(
                update=i + 1,
                env_step=(i + 1) * 800,
                task_index=i,
                mean_episode_reward=reward,
                episodes_completed=1,
                loss=0.0,
                optimizer_steps=(i + 1) * 125,
            )
            for i, reward in enumerate(rewards)
        ],
        scaling=[ScalingRow(step=i + 1, update=1, task_index=0, S=s) for i, s in enumerate(scales)],
        summary=RunSummary(cumulative_mean_episode_reward=cumulative),
    )


def test_reward_curve():
    rows = reward_curve([run("trac", 0, [10.0, 30.0]), run("trac", 1, [20.0, 10.0])])
    assert rows == [["trac", 1, 800, 15.0, 5.0, 2], ["trac", 2, 1600, 20.0, 10.0, 2]]


def test_scaling_trace():
    rows = scaling_trace([run("trac", 0, [1.0], [0.1, 0.5]), run("trac", 1, [1.0], [0.3, 0.5])])
    assert rows[0] == ["trac", 1, pytest.approx(0.2), pytest.approx(0.1)]
    assert rows[1] == ["trac", 2, 0.5, 0.0]


def test_scaling_trace_requires_trac_runs():
    with pytest.raises(MissingSeriesError):
        scaling_trace([run("adam", 0, [1.0])])


def test_lambda_bars_sorted_by_value():
    records = [
        run("lambda=1", 0, [1.0], cumulative=4.0),
        run("lambda=0.1", 0, [1.0], cumulative=2.0),
        run("lambda=0.1", 1, [1.0], cumulative=6.0),
    ]
    assert lambda_bars(records) == [
        ["lambda=0.1", 0.1, 4.0, 2.0, 2],
        ["lambda=1", 1.0, 4.0, 0.0, 1],
    ]


def test_lambda_bars_requires_sweep():
    with pytest.raises(MissingSeriesError):
        lambda_bars([run("trac", 0, [1.0])])


def test_emit(tmp_path):
    path = emit_plot_data([run("trac", 0, [1.0], [0.2])], "scaling_trace", tmp_path / "trace.csv")
    rows = read_csv(path)
    assert list(rows[0]) == ["variant", "step", "mean_S", "std_S"]
    assert float(rows[0]["mean_S"]) == 0.2


def test_unknown_kind(tmp_path):
    with pytest.raises(ValueError):
        emit_plot_data([], "histogram", tmp_path / "x.csv")
    assert {kind.value for kind in PlotKind} == {"reward_curve", "scaling_trace", "lambda_bars"}
