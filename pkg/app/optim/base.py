"""
Optimizer Module

This module defines the foundational Optimizer class that every base optimizer,
the TRAC meta-optimizer and the baseline wrappers inherit from. Training loops
and the OCO bench only ever talk to this interface.
"""

from abc import ABC, abstractmethod

from app.core.types import ParamVector


class Optimizer(ABC):
    """Abstract first-order optimizer over a flat parameter vector.

    Each call to step() consumes one gradient evaluated at the current
    parameters and returns the next parameters. Implementations keep their own
    state (moments, reference points, tuners) and are stepped sequentially by a
    single owner.

    Attributes:
        name: Auto-generated name based on the class name
    """

    @property
    def name(self) -> str:
        """Gets the name of the optimizer.

        Returns:
            String name derived from the class name
        """
        return self.__class__.__name__

    @abstractmethod
    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        """Apply one update.

        Args:
            params: Current parameters theta_t
            grad: Gradient evaluated at theta_t, dimensioned like params

        Returns:
            Next parameters theta_{t+1}
        """
        pass

    @abstractmethod
    def reset(self, params: ParamVector) -> None:
        """Discard all internal state and restart from `params`."""
        pass

    def on_task_boundary(self, params: ParamVector) -> ParamVector:
        """Hook called when the environment announces a new task.

        Only privileged baselines react; everything else returns params unchanged.
        """
        return params

    @property
    def scaling(self) -> float | None:
        """Current scaling S for TRAC-family optimizers, None otherwise."""
        return None

    @property
    def tuner_outputs(self) -> list[float]:
        """Per-tuner outputs s_j of the last step for TRAC-family optimizers."""
        return []
