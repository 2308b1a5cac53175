"""
Optimizer Wrappers Module

Baselines that change when an inner optimizer runs or restarts:

- Warmstart: run Base alone for the first `warm_steps` updates, then anchor
  TRAC at the weights reached and continue with TRAC.
- PrivilegedReset: told the task boundaries, reinitialize the parameters from
  a fresh random draw and restart the inner optimizer at each one.
"""

from collections.abc import Callable

import numpy as np

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.types import ParamVector
from app.logging.factory import logger
from app.optim.base import Optimizer
from app.optim.trac import Trac


class Warmstart(Optimizer):
    """Base alone for `warm_steps` updates, then TRAC anchored at the reached weights.

    At engagement Base is re-initialized at the new reference point, exactly as
    TRAC initializes it at construction.
    """

    def __init__(self, base: Optimizer, warm_steps: int, **trac_settings):
        if warm_steps < 0:
            raise ConfigurationError(
                ErrorMessages.invalid_config("warm_steps", f"{warm_steps} < 0")
            )
        self.base = base
        self.warm_steps = warm_steps
        self.trac_settings = trac_settings
        self.steps_taken = 0
        self.trac: Trac | None = None

    @property
    def name(self) -> str:
        return f"Warmstart({self.base.name}, {self.warm_steps})"

    @property
    def engaged(self) -> bool:
        return self.trac is not None

    def _engage(self, params: ParamVector) -> None:
        self.trac = Trac(params, self.base, **self.trac_settings)
        logger.info("Warmstart engaged TRAC after %d base steps", self.steps_taken)

    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        if self.trac is None and self.steps_taken >= self.warm_steps:
            self._engage(params)
        self.steps_taken += 1
        if self.trac is not None:
            return self.trac.step(params, grad)

        updated = self.base.step(params, grad)
        if self.steps_taken == self.warm_steps:
            self._engage(updated)
        return updated

    def reset(self, params: ParamVector) -> None:
        self.base.reset(params)
        self.steps_taken = 0
        self.trac = None

    @property
    def scaling(self) -> float | None:
        return self.trac.scaling if self.trac is not None else None

    @property
    def tuner_outputs(self) -> list[float]:
        return self.trac.tuner_outputs if self.trac is not None else []

    @property
    def theta_ref(self) -> ParamVector | None:
        return self.trac.theta_ref if self.trac is not None else None


def warmstart_wrap(base: Optimizer, warm_steps: int, **trac_settings) -> Warmstart:
    """Wrap `base` so that TRAC engages after `warm_steps` base-only updates."""
    return Warmstart(base, warm_steps, **trac_settings)


class PrivilegedReset(Optimizer):
    """Inner optimizer that restarts from a fresh random draw at every task boundary."""

    def __init__(self, inner: Optimizer, reinit: Callable[[], ParamVector]):
        self.inner = inner
        self.reinit = reinit
        self.resets = 0

    @property
    def name(self) -> str:
        return f"PrivilegedReset({self.inner.name})"

    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        return self.inner.step(params, grad)

    def reset(self, params: ParamVector) -> None:
        self.inner.reset(params)

    def on_task_boundary(self, params: ParamVector) -> ParamVector:
        fresh = np.asarray(self.reinit(), dtype=np.float64)
        self.inner.reset(fresh)
        self.resets += 1
        logger.debug("Privileged reset #%d: parameters reinitialized", self.resets)
        return fresh

    @property
    def scaling(self) -> float | None:
        return self.inner.scaling

    @property
    def tuner_outputs(self) -> list[float]:
        return self.inner.tuner_outputs


def privileged_reset_wrap(inner: Optimizer, reinit: Callable[[], ParamVector]) -> PrivilegedReset:
    """Wrap `inner` so task boundaries reinitialize parameters and optimizer state."""
    return PrivilegedReset(inner, reinit)
