"""
Gradient Descent Module

Plain constant-step gradient descent, the Base used in the regularization
analysis and the OCO bench.
"""

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.types import ParamVector, check_finite, check_same_dims
from app.optim.base import Optimizer


def sgd_step(params: ParamVector, grad: ParamVector, lr: float) -> ParamVector:
    """Return params - lr * grad.

    Raises:
        DimensionMismatchError: If grad is not dimensioned like params
        InvalidInputError: If grad has non-finite entries
    """
    check_same_dims(params, grad)
    check_finite(grad)
    return params - lr * grad


class SGD(Optimizer):
    """Gradient descent with a constant learning rate."""

    def __init__(self, lr: float):
        if lr < 0:
            raise ConfigurationError(ErrorMessages.invalid_config("lr", f"{lr} < 0"))
        self.lr = lr

    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        return sgd_step(params, grad, self.lr)

    def reset(self, params: ParamVector) -> None:
        # Stateless
        pass
