"""
TRAC Meta-Optimizer Module

Direction-magnitude decomposition around a reference point theta_ref. A Base
optimizer proposes the direction (its own iterate theta^Base), n discounted
tuners over a beta-grid choose the magnitude, and their outputs are summed:

    h_t         = <g_t, theta_t - theta_ref>
    S_{t+1}     = s_floor + sum_j s_{t+1,j}
    theta_{t+1} = theta_ref + (theta^Base_{t+1} - theta_ref) * S_{t+1}

With theta_1 = theta_ref the first input h_1 is zero, every tuner answers 0
and S would stay pinned at 0; the additive floor (default 1e-8, the initial
S and eps) keeps the iterate moving off the reference.
"""

import math
from collections.abc import Sequence
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.types import ParamVector, as_param_vector, check_finite, check_same_dims
from app.logging.factory import logger
from app.optim.base import Optimizer
from app.optim.tuner import DEFAULT_EPS, TunerState, tuner_init, tuner_step
from app.specfun.erfi import DEFAULT_CLAMP_BOUND

DEFAULT_BETAS: tuple[float, ...] = (0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999)


class HMode(str, Enum):
    """Which offset the tuner input is projected on"""

    META_OFFSET = "meta_offset"  # theta_t - theta_ref
    BASE_OFFSET = "base_offset"  # theta^Base_t - theta_ref


class TracState(BaseModel):
    """Complete meta-optimizer state. Single owner, stepped sequentially."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    theta_ref: np.ndarray = Field(description="Reference point")
    theta: np.ndarray = Field(description="Current played iterate theta_t")
    theta_base: np.ndarray = Field(description="Base optimizer's own iterate theta^Base_t")
    base: Optimizer = Field(description="Base optimizer, initialized at theta_ref")
    tuners: list[TunerState] = Field(min_length=1)
    S: float = Field(default=DEFAULT_EPS, description="Current scaling S_t")
    s_floor: float = Field(default=DEFAULT_EPS, description="Additive scale floor")
    h_mode: HMode = HMode.META_OFFSET
    last_outputs: list[float] = Field(default_factory=list, description="s_{t,j} of the last step")
    t: int = 0


def trac_init(
    theta_ref: ParamVector,
    base: Optimizer,
    betas: Sequence[float] = DEFAULT_BETAS,
    eps: float = DEFAULT_EPS,
    s_floor: float | None = None,
    h_mode: HMode = HMode.META_OFFSET,
    clamp_bound: float = DEFAULT_CLAMP_BOUND,
    clamp_nonnegative: bool = False,
) -> TracState:
    """Create one tuner per beta and initialize Base at theta_ref.

    Args:
        theta_ref: Reference point; also theta_1 and theta^Base_1
        base: Base optimizer; reset to theta_ref here
        betas: Discount grid, one tuner each
        eps: Shared tuner eps; also the initial S
        s_floor: Additive floor on S; defaults to eps
        h_mode: Offset used for the tuner input
        clamp_bound: erfi saturation bound passed to every tuner
        clamp_nonnegative: Floor every tuner output at zero

    Raises:
        ConfigurationError: If the grid is empty or any beta/eps is invalid
    """
    if len(betas) == 0:
        raise ConfigurationError(ErrorMessages.invalid_config("betas", "empty discount grid"))
    theta_ref = as_param_vector(theta_ref, "theta_ref").copy()
    tuners = [tuner_init(beta, eps, clamp_bound, clamp_nonnegative) for beta in betas]
    base.reset(theta_ref)
    return TracState(
        theta_ref=theta_ref,
        theta=theta_ref.copy(),
        theta_base=theta_ref.copy(),
        base=base,
        tuners=tuners,
        S=eps,
        s_floor=eps if s_floor is None else s_floor,
        h_mode=HMode(h_mode),
    )


def trac_step(state: TracState, g: ParamVector) -> tuple[TracState, ParamVector]:
    """One TRAC update from the gradient at theta_t.

    Raises:
        DimensionMismatchError: If g is not dimensioned like theta_ref
        InvalidInputError: If g has non-finite entries
    """
    check_same_dims(state.theta_ref, g)
    check_finite(g)

    if state.h_mode is HMode.META_OFFSET:
        offset = state.theta - state.theta_ref
    else:
        offset = state.theta_base - state.theta_ref
    h = float(np.dot(g, offset))

    theta_base_next = state.base.step(state.theta_base, g)
    outputs = [tuner_step(tuner, h)[1] for tuner in state.tuners]
    S_next = state.s_floor + math.fsum(outputs)

    state.theta_base = theta_base_next
    state.theta = state.theta_ref + (theta_base_next - state.theta_ref) * S_next
    state.S = S_next
    state.last_outputs = outputs
    state.t += 1
    return state, state.theta


class Trac(Optimizer):
    """TRAC around a Base optimizer, usable wherever an Optimizer is expected."""

    def __init__(
        self,
        theta_ref: ParamVector,
        base: Optimizer,
        betas: Sequence[float] = DEFAULT_BETAS,
        eps: float = DEFAULT_EPS,
        s_floor: float | None = None,
        h_mode: HMode = HMode.META_OFFSET,
        clamp_bound: float = DEFAULT_CLAMP_BOUND,
        clamp_nonnegative: bool = False,
    ):
        self._settings = {
            "betas": tuple(betas),
            "eps": eps,
            "s_floor": s_floor,
            "h_mode": h_mode,
            "clamp_bound": clamp_bound,
            "clamp_nonnegative": clamp_nonnegative,
        }
        self.state = trac_init(theta_ref, base, **self._settings)
        logger.debug(
            "Initialized TRAC over %s with %d tuners (h_mode=%s)",
            base.name,
            len(self.state.tuners),
            self.state.h_mode.value,
        )

    @property
    def name(self) -> str:
        return f"Trac({self.state.base.name})"

    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        # TRAC plays its own iterate; params is theta_t as returned by the last step
        check_same_dims(self.state.theta, params, "params")
        self.state, theta_next = trac_step(self.state, grad)
        return theta_next

    def reset(self, params: ParamVector) -> None:
        self.state = trac_init(params, self.state.base, **self._settings)

    @property
    def scaling(self) -> float:
        return self.state.S

    @property
    def tuner_outputs(self) -> list[float]:
        return list(self.state.last_outputs)

    @property
    def theta_ref(self) -> ParamVector:
        return self.state.theta_ref
