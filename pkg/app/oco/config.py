"""
OCO Bench Configuration Module

Settings for the quadratic online convex optimization bench: the stationary
horizon check and the piecewise stream whose best comparator is the origin.
"""

from pydantic import BaseModel, Field


class OcoOptions(BaseModel):
    """Quadratic bench settings."""

    center: list[float] = Field(
        default_factory=lambda: [1.0, -2.0, 0.5], min_length=1, description="Base task center c"
    )
    task_length: int = Field(
        default=10, gt=0, description="Rounds per task of the piecewise stream"
    )
    num_tasks: int = Field(default=40, gt=0, description="Tasks in the piecewise stream")
    good_lr: float = Field(default=0.19, gt=0.0, description="Reference GD learning rate")
    mistune_factor: float = Field(
        default=10.0, gt=0.0, description="Multiplier for the mis-tuned GD"
    )
    stationary_lr: float = Field(
        default=0.1, gt=0.0, description="GD learning rate on the stationary stream"
    )
    horizon: int = Field(
        default=500, gt=0, description="T for the average-regret comparison (T vs 2T)"
    )

    @property
    def mistuned_lr(self) -> float:
        return self.good_lr * self.mistune_factor
