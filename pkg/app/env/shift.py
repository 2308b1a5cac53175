"""
Shift Schedule Module

Piecewise-constant observation perturbation. Every `period` environment steps
(counted globally, across episode boundaries) each observation dimension gets
a fresh offset, and the new perturbation phase counts as a new task.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.env.config import EnvOptions

OBSERVATION_DIM = 4


class ShiftSchedule(BaseModel):
    """Current offsets and the clock that resamples them."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    period: int = Field(gt=0)
    offset_range: float = Field(ge=0.0)
    signed: bool = True
    current_offsets: np.ndarray = Field(default_factory=lambda: np.zeros(OBSERVATION_DIM))
    rng: np.random.Generator
    global_step: int = 0
    task_index: int = 0
    boundary: bool = Field(default=False, description="True right after a resample")

    def draw_offsets(self) -> np.ndarray:
        low = -self.offset_range if self.signed else 0.0
        return self.rng.uniform(low, self.offset_range, size=OBSERVATION_DIM)


def make_schedule(options: EnvOptions, rng: np.random.Generator) -> ShiftSchedule:
    """Build the schedule for one run; the first task is unperturbed unless configured otherwise."""
    schedule = ShiftSchedule(
        period=options.shift_period,
        offset_range=options.offset_range,
        signed=options.signed_offsets,
        rng=rng,
    )
    if options.perturb_first_task:
        schedule.current_offsets = schedule.draw_offsets()
    return schedule


def advance_schedule(schedule: ShiftSchedule) -> ShiftSchedule:
    """Count one environment step; resample on multiples of the period.

    The `boundary` flag is the task-boundary signal consumed by the privileged
    reset baseline.
    """
    schedule.global_step += 1
    schedule.boundary = schedule.global_step % schedule.period == 0
    if schedule.boundary:
        schedule.current_offsets = schedule.draw_offsets()
        schedule.task_index += 1
    return schedule
