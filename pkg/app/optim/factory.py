"""
Optimizer Factory Module

This module provides a factory class for creating optimizers by kind. It
wires the Adam base, the TRAC meta-optimizer and the baseline wrappers
together from one OptimizerOptions block.
"""

from collections.abc import Callable

from app.core.exceptions import ConfigurationError
from app.core.types import ParamVector
from app.optim.adam import Adam
from app.optim.base import Optimizer
from app.optim.config import OptimizerKind, OptimizerOptions
from app.optim.l2_init import L2Init
from app.optim.sgd import SGD
from app.optim.trac import Trac
from app.optim.wrappers import PrivilegedReset, Warmstart


class OptimizerFactory:
    """
    Factory class for creating optimizer instances.

    Each experiment run asks the factory for a fresh optimizer positioned at
    the run's initial parameters. TRAC-family optimizers and the L2-init and
    reset baselines all use the same Adam as Base, so comparisons differ only
    in the wrapper.

    Attributes:
        kind: The optimizer kind to build
        options: Hyperparameters shared by all kinds
    """

    SUPPORTED_KINDS = set(OptimizerKind)

    def __init__(self, kind: OptimizerKind | str, options: OptimizerOptions | None = None):
        """Initialize the factory with the specified optimizer kind."""
        try:
            self.kind = OptimizerKind(kind)
        except ValueError as exc:
            raise ConfigurationError(f"Unsupported optimizer kind: {kind}") from exc
        self.options = options or OptimizerOptions()

    def _adam(self, dim: int, weight_decay: float = 0.0) -> Adam:
        opts = self.options
        return Adam(
            dim,
            lr=opts.base_lr,
            beta1=opts.adam_beta1,
            beta2=opts.adam_beta2,
            eps=opts.adam_eps,
            weight_decay=weight_decay,
        )

    def create(
        self,
        params: ParamVector,
        reinit: Callable[[], ParamVector] | None = None,
    ) -> Optimizer:
        """
        Create an optimizer positioned at `params`.

        Args:
            params: Initial parameters; TRAC uses them as theta_ref
            reinit: Fresh-draw procedure, required for privileged_reset

        Returns:
            A ready-to-step Optimizer

        Raises:
            ConfigurationError: If privileged_reset is requested without reinit
        """
        opts = self.options
        dim = params.shape[0]

        match self.kind:
            case OptimizerKind.SGD:
                return SGD(opts.base_lr)
            case OptimizerKind.ADAM:
                return self._adam(dim)
            case OptimizerKind.ADAMW:
                return self._adam(dim, weight_decay=opts.weight_decay)
            case OptimizerKind.L2_INIT:
                return L2Init(self._adam(dim), opts.l2_lambda, params)
            case OptimizerKind.TRAC:
                return Trac(params, self._adam(dim), **opts.trac_settings())
            case OptimizerKind.WARMSTART_TRAC:
                return Warmstart(self._adam(dim), opts.warm_steps, **opts.trac_settings())
            case OptimizerKind.PRIVILEGED_RESET:
                if reinit is None:
                    raise ConfigurationError("privileged_reset requires a reinit procedure")
                return PrivilegedReset(self._adam(dim), reinit)
