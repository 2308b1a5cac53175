"""
Harness Configuration Module

The experiment configuration (one file per experiment, every field defaulted)
and the environment-bound harness settings.
"""

from enum import Enum
from functools import lru_cache
from typing import Self

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.nn.config import Activation
from app.oco.config import OcoOptions
from app.optim.config import OptimizerKind
from app.ppo.config import TrainingConfig

CONTROL_SEEDS = 25


class ExperimentKind(str, Enum):
    """Experiments the harness can run"""

    TRAC = "trac"
    ADAM = "adam"
    CRELU_ADAM = "crelu_adam"
    L2_SWEEP = "l2_sweep"
    WEIGHT_DECAY_SWEEP = "weight_decay_sweep"
    PRIVILEGED_RESET = "privileged_reset"
    WARMSTART_TRAC = "warmstart_trac"
    WARMSTART_ADAM = "warmstart_adam"
    OCO_BENCH = "oco_bench"
    SIMPLIFIED_EQUIVALENCE = "simplified_equivalence"

    @property
    def is_control(self) -> bool:
        """Runs PPO on the lifelong CartPole"""
        return self not in (ExperimentKind.OCO_BENCH, ExperimentKind.SIMPLIFIED_EQUIVALENCE)


class SimplifiedOptions(BaseModel):
    """Settings for the simplified-recursion equivalence experiment."""

    eta: float = Field(default=0.1, gt=0.0)
    beta: float = Field(default=0.99, gt=0.0, le=1.0)
    alpha: float = Field(default=0.01, ge=0.0)
    dim: int = Field(default=1, gt=0)
    steps: int = Field(default=1000, gt=0)
    initial_S: float = Field(default=1.0, description="S_1; must be nonzero")
    grad_scale: float = Field(
        default=0.1, gt=0.0, description="Gradients drawn uniform on +-grad_scale"
    )

    @field_validator("initial_S")
    @classmethod
    def validate_initial_scale(cls, v: float) -> float:
        """S_1 = 0 is the degenerate state"""
        if v == 0.0:
            raise ValueError("initial_S must be nonzero")
        return v


class Variant(BaseModel):
    """One arm of an experiment: an optimizer kind plus its training configuration."""

    name: str
    optimizer_kind: OptimizerKind
    training: TrainingConfig


class ExperimentConfig(TrainingConfig):
    """Complete description of one experiment; every field has a default."""

    experiment: ExperimentKind = ExperimentKind.TRAC
    seeds: list[int] = Field(default_factory=lambda: list(range(CONTROL_SEEDS)), min_length=1)
    total_env_steps: int = Field(default=20_000, gt=0, description="Environment steps per run")
    oco: OcoOptions = Field(default_factory=OcoOptions)
    simplified: SimplifiedOptions = Field(default_factory=SimplifiedOptions)

    @model_validator(mode="after")
    def validate_budget(self) -> Self:
        """Control runs need at least one full update"""
        if self.experiment.is_control and self.total_env_steps < self.ppo.steps_per_update:
            raise ValueError(
                f"total_env_steps ({self.total_env_steps}) must be at least "
                f"steps_per_update ({self.ppo.steps_per_update})"
            )
        return self

    def training(self, **optimizer_updates) -> TrainingConfig:
        """TrainingConfig view, optionally with optimizer options overridden."""
        return TrainingConfig(
            ppo=self.ppo,
            env=self.env,
            network=self.network,
            optimizer=self.optimizer.model_copy(update=optimizer_updates),
        )

    def variants(self) -> list[Variant]:
        """Arms executed for each seed; empty for non-control experiments."""
        match self.experiment:
            case ExperimentKind.TRAC:
                return [
                    Variant(
                        name="trac", optimizer_kind=OptimizerKind.TRAC, training=self.training()
                    )
                ]
            case ExperimentKind.ADAM | ExperimentKind.WARMSTART_ADAM:
                # Warmstarting Adam with Adam leaves the run unchanged
                return [
                    Variant(
                        name="adam", optimizer_kind=OptimizerKind.ADAM, training=self.training()
                    )
                ]
            case ExperimentKind.CRELU_ADAM:
                training = self.training()
                training.network = training.network.model_copy(
                    update={"activation": Activation.CRELU}
                )
                return [
                    Variant(name="crelu_adam", optimizer_kind=OptimizerKind.ADAM, training=training)
                ]
            case ExperimentKind.L2_SWEEP:
                return [
                    Variant(
                        name=f"lambda={lam:g}",
                        optimizer_kind=OptimizerKind.L2_INIT,
                        training=self.training(l2_lambda=lam),
                    )
                    for lam in self.optimizer.lambda_grid
                ]
            case ExperimentKind.WEIGHT_DECAY_SWEEP:
                return [
                    Variant(
                        name=f"weight_decay={wd:g}",
                        optimizer_kind=OptimizerKind.ADAMW,
                        training=self.training(weight_decay=wd),
                    )
                    for wd in self.optimizer.weight_decay_grid
                ]
            case ExperimentKind.PRIVILEGED_RESET:
                return [
                    Variant(
                        name="privileged_reset",
                        optimizer_kind=OptimizerKind.PRIVILEGED_RESET,
                        training=self.training(),
                    )
                ]
            case ExperimentKind.WARMSTART_TRAC:
                return [
                    Variant(
                        name="warmstart_trac",
                        optimizer_kind=OptimizerKind.WARMSTART_TRAC,
                        training=self.training(),
                    )
                ]
            case _:
                return []


class HarnessSettings(BaseSettings):
    """Environment-bound harness settings."""

    output_root: str = Field(default="runs", alias="TRAC_OUTPUT_ROOT")
    experiments_dir: str = Field(default="experiments", alias="TRAC_EXPERIMENTS_DIR")

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")


@lru_cache
def get_harness_settings() -> HarnessSettings:
    """
    Get the harness settings. Uses lru_cache to avoid repeated loading

    Returns:
        HarnessSettings: The harness settings.
    """
    return HarnessSettings()
