"""
Exceptions and Error Messages

Defines exception hierarchy and standardized error message formatting
for the optimizers, environments and experiment harness.
"""


class TracError(Exception):
    """Base exception for all project errors."""

    pass


class ConfigurationError(TracError):
    """Invalid hyperparameters or experiment configuration. Non-retryable."""

    pass


class InvalidInputError(TracError):
    """Non-finite or otherwise invalid numeric input."""

    pass


class DimensionMismatchError(InvalidInputError):
    """Vectors or arrays whose shapes do not line up."""

    pass


class DegenerateStateError(TracError):
    """Optimizer state from which the update rule is undefined."""

    pass


class ProtocolError(TracError):
    """Operation called out of order (e.g. stepping a finished episode)."""

    pass


class NonFiniteLossError(TracError):
    """PPO loss evaluated to NaN or infinity."""

    pass


class ExperimentError(TracError):
    """A run failed while an experiment was executing."""

    pass


class MissingSeriesError(TracError):
    """Requested metric series is absent from the run records."""

    pass


class ErrorMessages:
    """Standardized error message formatting utility."""

    @staticmethod
    def invalid_config(field: str, reason: str) -> str:
        return f"Invalid configuration for '{field}': {reason}"

    @staticmethod
    def non_finite(name: str) -> str:
        return f"Non-finite value in {name}"

    @staticmethod
    def dim_mismatch(name: str, expected: tuple, actual: tuple) -> str:
        return f"Dimension mismatch for {name}: expected {expected}, got {actual}"

    @staticmethod
    def non_finite_loss(term: str, value: float) -> str:
        return f"PPO loss is non-finite: {term} term evaluated to {value}"

    @staticmethod
    def run_failed(run: str, error: str) -> str:
        return f"Run {run} failed: {error}"
