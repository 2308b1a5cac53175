"""
L2-Init Regularization Module

Gradient descent with the regularizer (lambda/2) * ||theta - theta_ref||^2:

    theta_{t+1} = theta_t - eta * [g_t + lambda * (theta_t - theta_ref)]

equivalently theta_{t+1} - theta_ref = (1 - lambda*eta)(theta_t - theta_ref) - eta*g_t,
a (1 - lambda*eta)-discount toward the reference followed by a gradient step.
The L2Init optimizer feeds the regularized gradient to any inner base, which
gives the L2-Init-Adam baseline for the lambda sweep.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.types import ParamVector, check_finite, check_same_dims
from app.optim.base import Optimizer


class L2InitState(BaseModel):
    """Learning rate, regularization strength and reference point."""

    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)

    lr: float = Field(gt=0.0, description="Learning rate eta")
    lam: float = Field(ge=0.0, alias="lambda", description="Regularization strength lambda")
    theta_ref: np.ndarray = Field(description="Reference point, usually the initialization")


def l2_init_step(state: L2InitState, params: ParamVector, grad: ParamVector) -> ParamVector:
    """One L2-init-regularized gradient descent step.

    Raises:
        DimensionMismatchError: If params, grad and theta_ref disagree in shape
    """
    check_same_dims(params, grad)
    check_same_dims(params, state.theta_ref, "theta_ref")
    check_finite(grad)
    return params - state.lr * (grad + state.lam * (params - state.theta_ref))


def regularized_gradient(
    grad: ParamVector, params: ParamVector, lam: float, theta_ref: ParamVector
) -> ParamVector:
    """g + lambda * (theta - theta_ref), the gradient of the regularized loss."""
    check_same_dims(params, grad)
    check_same_dims(params, theta_ref, "theta_ref")
    return grad + lam * (params - theta_ref)


class L2Init(Optimizer):
    """Inner optimizer driven by the L2-init-regularized gradient.

    With an SGD inner this is exactly `l2_init_step`.
    """

    def __init__(self, inner: Optimizer, lam: float, theta_ref: ParamVector):
        if lam < 0:
            raise ConfigurationError(ErrorMessages.invalid_config("lambda", f"{lam} < 0"))
        self.inner = inner
        self.lam = lam
        self.theta_ref = np.array(theta_ref, dtype=np.float64)

    @property
    def name(self) -> str:
        return f"L2Init({self.inner.name}, lambda={self.lam:g})"

    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        return self.inner.step(params, regularized_gradient(grad, params, self.lam, self.theta_ref))

    def reset(self, params: ParamVector) -> None:
        self.theta_ref = np.array(params, dtype=np.float64)
        self.inner.reset(params)
