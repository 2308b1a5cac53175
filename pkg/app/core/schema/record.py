"""
Run Record Schema Module

Rows appended during a run and the terminal summary derived from them. A
RunRecord is append-only while its run executes; `summarize` recomputes the
summary from the rows alone so aggregates can be rebuilt offline from the
persisted files.
"""

import math
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, Field


class RunStatus(str, Enum):
    """Terminal state of a run"""

    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class UpdateRow(BaseModel):
    """One row per PPO update."""

    update: int = Field(description="1-based update index")
    env_step: int = Field(description="Global environment step at the end of the update")
    task_index: int = Field(description="Task index at the end of the rollout")
    mean_episode_reward: float = Field(
        description="Mean return of episodes finished in the rollout (in-progress return if none)"
    )
    episodes_completed: int
    loss: float = Field(description="Mean PPO loss over the update's minibatches")
    S: float | None = Field(default=None, description="Scaling after the update, TRAC-family only")
    optimizer_steps: int = Field(description="Cumulative optimizer steps")


class EpisodeRow(BaseModel):
    """One row per finished episode."""

    episode: int
    env_step: int = Field(description="Global environment step at which the episode ended")
    task_index: int = Field(description="Task the episode started in")
    episode_return: float
    length: int
    truncated: bool = Field(description="Ended by the episode cap rather than failure")


class TaskRow(BaseModel):
    """One row per task boundary of the shift schedule."""

    task_index: int = Field(description="Index of the task that begins")
    env_step: int = Field(description="Global environment step at which the task begins")
    update: int = Field(default=0, description="Update whose rollout crossed the boundary")


class ScalingRow(BaseModel):
    """One row per optimizer step of a TRAC-family optimizer."""

    step: int = Field(description="1-based optimizer step")
    update: int
    task_index: int
    S: float
    s: list[float] = Field(default_factory=list, description="Per-tuner outputs s_1..s_n")


class OcoRow(BaseModel):
    """One row per OCO round."""

    step: int
    loss: float
    regret_to_date: float
    S: float | None = None


class EquivalenceRow(BaseModel):
    """One step of the simplified-recursion check against its closed form."""

    step: int
    S: float
    h: float
    effective_discount: float = Field(description="beta - alpha * h / S_t")
    l2_discount: float | None = Field(
        default=None,
        description="Measured discount of the paired L2-init GD run; empty while its offset is 0",
    )
    l2_gap: float = Field(
        default=0.0, description="Relative gap between the iterate and the paired L2-init iterate"
    )
    residual: float = Field(description="Relative gap between the iterate and the closed form")


class RunSummary(BaseModel):
    """Terminal summary; every field is a pure function of the rows."""

    cumulative_mean_episode_reward: float = 0.0
    mean_reward_first_update: float | None = None
    mean_reward_post_first_shift: float | None = None
    mean_reward_at_task_starts: float | None = None
    mean_reward_per_task: dict[int, float] = Field(default_factory=dict)
    mean_S_per_task: dict[int, float] = Field(default_factory=dict)
    final_mean_S: float | None = None
    max_abs_S: float | None = None
    task_count: int = 0
    optimizer_steps: int = 0
    wall_time: float = 0.0


class RunRecord(BaseModel):
    """Everything one (experiment, variant, seed) run produced."""

    experiment: str
    variant: str = Field(default="default", description="Sweep value or comparison arm")
    seed: int
    status: RunStatus = RunStatus.RUNNING
    error: str | None = None
    updates: list[UpdateRow] = Field(default_factory=list)
    episodes: list[EpisodeRow] = Field(default_factory=list)
    tasks: list[TaskRow] = Field(default_factory=list)
    scaling: list[ScalingRow] = Field(default_factory=list)
    oco: list[OcoRow] = Field(default_factory=list)
    equivalence: list[EquivalenceRow] = Field(default_factory=list)
    summary: RunSummary = Field(default_factory=RunSummary)
    extra: dict[str, Any] = Field(default_factory=dict)

    @property
    def run_id(self) -> str:
        return f"{self.experiment}/{self.variant}/seed-{self.seed}"


def _mean(values: list[float]) -> float | None:
    return float(np.mean(values)) if values else None


def _tasks_run(record: RunRecord) -> list[int]:
    """Indices of tasks with at least one environment step, task 0 included."""
    if not record.updates:
        return []
    last_step = record.updates[-1].env_step
    return [0, *(row.task_index for row in record.tasks if row.env_step < last_step)]


def _first_episode_returns(record: RunRecord) -> dict[int, float]:
    """Return of the first episode started in each task."""
    first: dict[int, float] = {}
    for episode in record.episodes:
        first.setdefault(episode.task_index, episode.episode_return)
    return first


def _rewards_after_first_shift(record: RunRecord) -> list[float]:
    """Window rewards of updates whose rollout began at or after the first task boundary."""
    if not record.tasks:
        return [row.mean_episode_reward for row in record.updates if row.task_index >= 1]
    first_shift = record.tasks[0].env_step
    window_start = 0
    rewards = []
    for row in record.updates:
        if window_start >= first_shift:
            rewards.append(row.mean_episode_reward)
        window_start = row.env_step
    return rewards


def summarize(record: RunRecord, wall_time: float | None = None) -> RunSummary:
    """Recompute the terminal summary from the record's rows.

    Task statistics come from the task and episode rows, so every task start
    counts even when several tasks begin inside one rollout window.
    """
    rewards = [row.mean_episode_reward for row in record.updates]
    tasks = _tasks_run(record)

    per_task: dict[int, list[float]] = {}
    for episode in record.episodes:
        per_task.setdefault(episode.task_index, []).append(episode.episode_return)

    first_returns = _first_episode_returns(record)
    task_starts = [first_returns[task] for task in tasks[1:] if task in first_returns]

    s_per_task: dict[int, list[float]] = {}
    for row in record.scaling:
        s_per_task.setdefault(row.task_index, []).append(row.S)

    final_mean_S = None
    if record.scaling:
        last_update = record.scaling[-1].update
        final_mean_S = _mean([row.S for row in record.scaling if row.update == last_update])

    return RunSummary(
        cumulative_mean_episode_reward=math.fsum(rewards),
        mean_reward_first_update=rewards[0] if rewards else None,
        mean_reward_post_first_shift=_mean(_rewards_after_first_shift(record)),
        mean_reward_at_task_starts=_mean(task_starts),
        mean_reward_per_task={task: float(np.mean(v)) for task, v in per_task.items()},
        mean_S_per_task={task: float(np.mean(v)) for task, v in s_per_task.items()},
        final_mean_S=final_mean_S,
        max_abs_S=max((abs(row.S) for row in record.scaling), default=None),
        task_count=len(tasks),
        optimizer_steps=record.updates[-1].optimizer_steps if record.updates else 0,
        wall_time=record.summary.wall_time if wall_time is None else wall_time,
    )
