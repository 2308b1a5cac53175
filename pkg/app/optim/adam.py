"""
Adam Module

Bias-corrected Adam over a flat parameter vector, with optional decoupled
weight decay (the AdamW variant: the decay term is applied to the parameters
directly, never folded into the gradient moments).
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.types import ParamVector, check_finite, check_same_dims
from app.optim.base import Optimizer


class AdamState(BaseModel):
    """Hyperparameters and moment accumulators of one Adam instance."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    lr: float = Field(default=0.01, ge=0.0, description="Learning rate")
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)
    weight_decay: float = Field(default=0.0, ge=0.0, description="Decoupled weight decay")
    m: np.ndarray = Field(description="First moment estimate")
    v: np.ndarray = Field(description="Second moment estimate, elementwise >= 0")
    t: int = Field(default=0, ge=0)


def adam_init(
    dim: int,
    lr: float = 0.01,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
    weight_decay: float = 0.0,
) -> AdamState:
    """Create Adam state with zero moments for a `dim`-dimensional vector."""
    if weight_decay < 0 or lr < 0:
        raise ConfigurationError(
            ErrorMessages.invalid_config("adam", f"lr={lr}, weight_decay={weight_decay}")
        )
    return AdamState(
        lr=lr,
        beta1=beta1,
        beta2=beta2,
        eps=eps,
        weight_decay=weight_decay,
        m=np.zeros(dim),
        v=np.zeros(dim),
    )


def adam_step(
    state: AdamState, params: ParamVector, grad: ParamVector
) -> tuple[AdamState, ParamVector]:
    """One bias-corrected Adam update, PyTorch semantics.

    Raises:
        DimensionMismatchError: If params, grad and the moments disagree in shape
        InvalidInputError: If grad has non-finite entries
    """
    check_same_dims(params, grad)
    check_same_dims(state.m, params, "params")
    check_finite(grad)

    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * (grad * grad)

    m_hat = state.m / (1.0 - state.beta1**state.t)
    v_hat = state.v / (1.0 - state.beta2**state.t)
    updated = params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    if state.weight_decay > 0:
        updated = updated - state.lr * state.weight_decay * params
    return state, updated


class Adam(Optimizer):
    """Adam; with weight_decay > 0 this is the decoupled-decay (AdamW) baseline."""

    def __init__(
        self,
        dim: int,
        lr: float = 0.01,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
        weight_decay: float = 0.0,
    ):
        self.state = adam_init(dim, lr, beta1, beta2, eps, weight_decay)

    @property
    def name(self) -> str:
        return "AdamW" if self.state.weight_decay > 0 else "Adam"

    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        self.state, updated = adam_step(self.state, params, grad)
        return updated

    def reset(self, params: ParamVector) -> None:
        self.state.m = np.zeros_like(params)
        self.state.v = np.zeros_like(params)
        self.state.t = 0
