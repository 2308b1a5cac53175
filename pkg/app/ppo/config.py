"""
PPO Configuration Module

Control-experiment PPO hyperparameters and the complete training
configuration handed to the lifelong driver.
"""

from typing import Self

from pydantic import BaseModel, Field, model_validator

from app.env.config import EnvOptions
from app.nn.config import NetworkOptions
from app.optim.config import OptimizerOptions


class PpoConfig(BaseModel):
    """PPO hyperparameters; defaults are the control-environment values."""

    steps_per_update: int = Field(
        default=800, gt=0, description="Environment steps per rollout (two capped episodes)"
    )
    minibatch_size: int = Field(default=32, gt=0)
    epochs_per_update: int = Field(default=5, gt=0)
    clip_eps: float = Field(default=0.2, gt=0.0, lt=1.0)
    value_coeff: float = Field(default=0.5, ge=0.0)
    entropy_coeff: float = Field(default=0.01, ge=0.0)
    gamma: float = Field(default=0.99, ge=0.0, le=1.0)
    gae_lambda: float = Field(default=0.95, ge=0.0, le=1.0)
    advantage_eps: float = Field(
        default=1e-8, gt=0.0, description="Added to the std when normalizing advantages"
    )

    @model_validator(mode="after")
    def validate_minibatching(self) -> Self:
        """Rollouts must split into whole minibatches"""
        if self.steps_per_update % self.minibatch_size != 0:
            raise ValueError(
                f"steps_per_update ({self.steps_per_update}) must be divisible by "
                f"minibatch_size ({self.minibatch_size})"
            )
        return self

    @property
    def minibatches_per_epoch(self) -> int:
        return self.steps_per_update // self.minibatch_size

    @property
    def optimizer_steps_per_update(self) -> int:
        return self.minibatches_per_epoch * self.epochs_per_update


class TrainingConfig(BaseModel):
    """Everything one lifelong training run needs besides the optimizer kind and seed."""

    ppo: PpoConfig = Field(default_factory=PpoConfig)
    env: EnvOptions = Field(default_factory=EnvOptions)
    network: NetworkOptions = Field(default_factory=NetworkOptions)
    optimizer: OptimizerOptions = Field(default_factory=OptimizerOptions)
