"""
Optimizer Configuration Module

Hyperparameters shared by every optimizer the harness can build. Defaults are
the control-experiment values: Adam with learning rate 0.01, the six-point
beta-grid, S_1 = eps = 1e-8 and a 30-step warmstart.
"""

from enum import Enum

from pydantic import BaseModel, Field, field_validator

from app.optim.trac import DEFAULT_BETAS, HMode
from app.specfun.erfi import DEFAULT_CLAMP_BOUND, checked_clamp_bound

LAMBDA_GRID: tuple[float, ...] = (0.2, 0.8, 1, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50)
WEIGHT_DECAY_GRID: tuple[float, ...] = (0.0001, 0.001, 0.01, 0.1, 1.0, 5.0, 10.0, 15.0, 50.0)


class OptimizerKind(str, Enum):
    """Optimizers the factory can build"""

    SGD = "sgd"
    ADAM = "adam"
    ADAMW = "adamw"
    L2_INIT = "l2_init"
    TRAC = "trac"
    WARMSTART_TRAC = "warmstart_trac"
    PRIVILEGED_RESET = "privileged_reset"


class OptimizerOptions(BaseModel):
    """Optimizer hyperparameters for one experiment."""

    base_lr: float = Field(default=0.01, ge=0.0, description="Base (Adam or GD) learning rate")
    adam_beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    adam_beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    adam_eps: float = Field(default=1e-8, gt=0.0)

    betas: list[float] = Field(
        default_factory=lambda: list(DEFAULT_BETAS), min_length=1, description="TRAC discount grid"
    )
    eps: float = Field(default=1e-8, gt=0.0, description="Tuner eps and initial scaling S_1")
    s_floor: float | None = Field(default=None, description="Additive floor on S; None uses eps")
    h_mode: HMode = Field(default=HMode.META_OFFSET)
    erfi_clamp: float = Field(default=DEFAULT_CLAMP_BOUND, gt=0.0)
    clamp_nonnegative: bool = Field(default=False, description="Floor tuner outputs at zero")

    l2_lambda: float = Field(default=0.0, ge=0.0, description="L2-init strength for a single run")
    lambda_grid: list[float] = Field(default_factory=lambda: list(LAMBDA_GRID))
    weight_decay: float = Field(
        default=0.0, ge=0.0, description="Decoupled weight decay for a single run"
    )
    weight_decay_grid: list[float] = Field(default_factory=lambda: list(WEIGHT_DECAY_GRID))
    warm_steps: int = Field(
        default=30, ge=0, description="Base-only optimizer steps before TRAC engages"
    )

    @field_validator("betas")
    @classmethod
    def validate_betas(cls, v: list[float]) -> list[float]:
        """Every discount factor must lie in (0, 1]"""
        bad = [beta for beta in v if not 0.0 < beta <= 1.0]
        if bad:
            raise ValueError(f"Discount factors must lie in (0, 1], got {bad}")
        return v

    @field_validator("erfi_clamp")
    @classmethod
    def validate_erfi_clamp(cls, v: float) -> float:
        """erfi must stay finite at the saturation bound"""
        return checked_clamp_bound(v)

    @field_validator("lambda_grid", "weight_decay_grid")
    @classmethod
    def validate_grid(cls, v: list[float]) -> list[float]:
        """Sweep grids must be non-empty and nonnegative"""
        if not v or any(value < 0 for value in v):
            raise ValueError("Sweep grid must be a non-empty list of nonnegative values")
        return v

    def trac_settings(self) -> dict:
        """Keyword arguments for Trac / Warmstart."""
        return {
            "betas": tuple(self.betas),
            "eps": self.eps,
            "s_floor": self.s_floor,
            "h_mode": self.h_mode,
            "clamp_bound": self.erfi_clamp,
            "clamp_nonnegative": self.clamp_nonnegative,
        }
