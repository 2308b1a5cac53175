"""
Environment Configuration Module

Options for the lifelong CartPole: how often the observation perturbation is
resampled, its range and sign convention, and the episode cap.
"""

from pydantic import BaseModel, Field

SHIFT_PERIOD = 200
OFFSET_RANGE = 2.0
EPISODE_CAP = 400


class EnvOptions(BaseModel):
    """Lifelong CartPole options."""

    shift_period: int = Field(default=SHIFT_PERIOD, gt=0, description="Environment steps per task")
    offset_range: float = Field(
        default=OFFSET_RANGE, ge=0.0, description="Perturbation magnitude bound"
    )
    signed_offsets: bool = Field(
        default=True,
        description="Draw offsets uniform on [-range, range]; false draws from [0, range]",
    )
    perturb_first_task: bool = Field(
        default=False, description="Apply a perturbation during the first task as well"
    )
    episode_cap: int = Field(default=EPISODE_CAP, gt=0, description="Maximum steps per episode")
