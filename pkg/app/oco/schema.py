"""
OCO Schema Module

Loss streams and regret records for the online convex optimization bench.
Every loss is the quadratic l_t(x) = 0.5 * ||x - c_t||^2, whose centers are
piecewise-constant over tasks, so comparators and regret have closed forms.
"""

from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.schema.record import OcoRow


class QuadraticLossSeq(BaseModel):
    """Sequence of quadratic losses, one center per round."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    centers: np.ndarray = Field(description="Array of shape (T, d); row t-1 is c_t")
    task_length: int = Field(gt=0, description="Rounds per constant-center task")

    @property
    def total_steps(self) -> int:
        return int(self.centers.shape[0])

    @property
    def dim(self) -> int:
        return int(self.centers.shape[1])

    @model_validator(mode="after")
    def validate_centers(self) -> Self:
        """Centers must be a finite, non-empty (T, d) array"""
        if self.centers.ndim != 2 or self.centers.shape[0] == 0:
            raise ValueError(
                f"centers must have shape (T, d) with T >= 1, got {self.centers.shape}"
            )
        if not np.all(np.isfinite(self.centers)):
            raise ValueError("centers must be finite")
        return self


def piecewise_sequence(task_centers: np.ndarray, task_length: int) -> QuadraticLossSeq:
    """Repeat each task's center for `task_length` rounds."""
    task_centers = np.atleast_2d(np.asarray(task_centers, dtype=np.float64))
    return QuadraticLossSeq(
        centers=np.repeat(task_centers, task_length, axis=0), task_length=task_length
    )


def stationary_sequence(center: np.ndarray, total_steps: int) -> QuadraticLossSeq:
    """A single task of `total_steps` rounds around `center`."""
    return piecewise_sequence(np.asarray(center, dtype=np.float64)[None, :], total_steps)


def alternating_sequence(center: np.ndarray, task_length: int, num_tasks: int) -> QuadraticLossSeq:
    """Tasks alternate between +center and -center.

    With an even number of tasks the best fixed comparator is the origin.
    """
    center = np.asarray(center, dtype=np.float64)
    signs = np.where(np.arange(num_tasks) % 2 == 0, 1.0, -1.0)
    return piecewise_sequence(signs[:, None] * center[None, :], task_length)


class RegretRecord(BaseModel):
    """Outcome of one OCO run against a fixed comparator."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    algorithm: str
    iterates: list[np.ndarray] = Field(default_factory=list, description="Played x_1..x_T")
    losses: list[float] = Field(default_factory=list)
    comparator: np.ndarray
    cumulative_loss: float = 0.0
    regret: float = 0.0
    rows: list[OcoRow] = Field(default_factory=list, description="Per-round metrics")

    @property
    def average_regret(self) -> float:
        return self.regret / max(len(self.losses), 1)
