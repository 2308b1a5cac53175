"""
Simplified TRAC Module

The reduced meta-optimizer that connects TRAC to L2 regularization: Base is
gradient descent with learning rate eta, a single discount beta, and the tuner
is replaced by beta-discounted gradient descent on the scale,

    S_{t+1} = beta * S_t - alpha * h_t,

so that, whenever S_t != 0,

    theta_{t+1} - theta_ref = (beta - alpha * h_t / S_t)(theta_t - theta_ref) - eta * S_{t+1} * g_t.

Compared with L2-init gradient descent, beta plays the role of the effective
discount 1 - lambda*eta and eta*S_{t+1} the effective learning rate.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import DegenerateStateError
from app.core.types import ParamVector, as_param_vector, check_finite, check_same_dims


class SimplifiedTracConfig(BaseModel):
    """Hyperparameters and running state of the simplified recursion."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    eta: float = Field(gt=0.0, description="Base gradient descent learning rate")
    beta: float = Field(gt=0.0, le=1.0, description="Single discount factor")
    alpha: float = Field(ge=0.0, description="Tuner learning rate")
    theta_ref: np.ndarray
    S: float = Field(default=1.0, description="Current scale S_t")
    theta: np.ndarray = Field(description="Played iterate theta_t")
    theta_base: np.ndarray = Field(description="Base iterate theta^Base_t")
    last_h: float = 0.0
    t: int = 0


def simplified_trac_init(
    theta_ref: ParamVector, eta: float, beta: float, alpha: float, S: float = 1.0
) -> SimplifiedTracConfig:
    theta_ref = as_param_vector(theta_ref, "theta_ref").copy()
    return SimplifiedTracConfig(
        eta=eta,
        beta=beta,
        alpha=alpha,
        theta_ref=theta_ref,
        S=S,
        theta=theta_ref.copy(),
        theta_base=theta_ref.copy(),
    )


def simplified_trac_step(
    cfg: SimplifiedTracConfig, g: ParamVector
) -> tuple[SimplifiedTracConfig, ParamVector]:
    """One step of the simplified recursion.

    Raises:
        DegenerateStateError: If S_t == 0
        DimensionMismatchError: If g is not dimensioned like theta_ref
    """
    if cfg.S == 0.0:
        raise DegenerateStateError("Simplified TRAC requires S_t != 0")
    check_same_dims(cfg.theta_ref, g)
    check_finite(g)

    h = float(np.dot(g, cfg.theta - cfg.theta_ref))
    theta_base_next = cfg.theta_base - cfg.eta * g
    S_next = cfg.beta * cfg.S - cfg.alpha * h

    cfg.theta_base = theta_base_next
    cfg.theta = cfg.theta_ref + S_next * (theta_base_next - cfg.theta_ref)
    cfg.S = S_next
    cfg.last_h = h
    cfg.t += 1
    return cfg, cfg.theta


def effective_discount(beta: float, alpha: float, S: float, h: float) -> float:
    """beta - alpha * h / S, the coefficient on theta_t - theta_ref."""
    if S == 0.0:
        raise DegenerateStateError("Effective discount undefined at S_t == 0")
    return beta - alpha * h / S


def recursion_offset(
    offset: ParamVector,
    g: ParamVector,
    eta: float,
    beta: float,
    alpha: float,
    S: float,
    S_next: float,
    h: float,
) -> ParamVector:
    """Right-hand side of the closed-form recursion for theta_{t+1} - theta_ref."""
    return effective_discount(beta, alpha, S, h) * offset - eta * S_next * g


def measured_discount(
    offset: ParamVector, next_offset: ParamVector, gradient_step: ParamVector
) -> float | None:
    """Least-squares d in next_offset = d * offset - gradient_step; None when offset is 0.

    Applied to the offsets of any discount-then-step recursion it recovers the
    discount actually realized, so two runs can be compared on a common stream.
    """
    norm2 = float(np.dot(offset, offset))
    if norm2 == 0.0:
        return None
    return float(np.dot(next_offset + gradient_step, offset)) / norm2
