"""
Discounted Tuner Module

One-dimensional discounted parameter-free tuner. It consumes a scalar stream
h_t and emits the scaling s_{t+1} through the erfi decision rule:

    v_t     = beta^2 v_{t-1} + h_t^2
    sigma_t = beta sigma_{t-1} - h_t
    s_{t+1} = (eps / erfi(1/sqrt(2))) * erfi(sigma_t / (sqrt(2 v_t) + eps))

The output keeps the sign of sigma_t; it is only floored at zero when
`clamp_nonnegative` is set.
"""

import math

from pydantic import BaseModel, Field, ValidationError, field_validator

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.types import check_finite_scalar
from app.specfun.erfi import DEFAULT_CLAMP_BOUND, checked_clamp_bound, erfi, erfi_inv_sqrt2

DEFAULT_EPS = 1e-8


class TunerState(BaseModel):
    """Running statistics of one tuner. Stepped in place, one instance per beta."""

    beta: float = Field(gt=0.0, le=1.0, description="Discount factor")
    eps: float = Field(
        default=DEFAULT_EPS, gt=0.0, description="Small value in prefactor and denominator"
    )
    v: float = Field(default=0.0, ge=0.0, description="Running discounted variance")
    sigma: float = Field(default=0.0, description="Running discounted negative sum")
    t: int = Field(default=0, ge=0, description="Number of inputs consumed")
    clamp_bound: float = Field(default=DEFAULT_CLAMP_BOUND, gt=0.0)
    clamp_nonnegative: bool = Field(
        default=False,
        description="Floor outputs at zero (ablation; off reproduces the rule as written)",
    )

    @field_validator("clamp_bound")
    @classmethod
    def validate_clamp_bound(cls, v: float) -> float:
        return checked_clamp_bound(v)

    @property
    def max_output(self) -> float:
        """Upper bound on |s| implied by the erfi saturation."""
        return self.eps * erfi(self.clamp_bound, self.clamp_bound) / erfi_inv_sqrt2()


def tuner_init(
    beta: float,
    eps: float = DEFAULT_EPS,
    clamp_bound: float = DEFAULT_CLAMP_BOUND,
    clamp_nonnegative: bool = False,
) -> TunerState:
    """Create a fresh tuner with v = 0 and sigma = 0.

    Raises:
        ConfigurationError: If beta is outside (0, 1], eps <= 0 or erfi overflows at clamp_bound
    """
    try:
        return TunerState(
            beta=beta, eps=eps, clamp_bound=clamp_bound, clamp_nonnegative=clamp_nonnegative
        )
    except ValidationError as exc:
        raise ConfigurationError(
            ErrorMessages.invalid_config(
                "tuner", f"beta={beta}, eps={eps}, clamp_bound={clamp_bound}"
            )
        ) from exc


def tuner_step(state: TunerState, h: float) -> tuple[TunerState, float]:
    """Consume h_t and return the updated state with the next scaling s_{t+1}.

    Raises:
        InvalidInputError: If h is NaN or infinite
    """
    h = check_finite_scalar(h, "tuner input")

    state.v = state.beta * state.beta * state.v + h * h
    state.sigma = state.beta * state.sigma - h
    state.t += 1

    argument = state.sigma / (math.sqrt(2.0 * state.v) + state.eps)
    s_next = (state.eps / erfi_inv_sqrt2()) * erfi(argument, state.clamp_bound)
    if state.clamp_nonnegative:
        s_next = max(s_next, 0.0)
    return state, s_next
