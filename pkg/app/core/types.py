"""
Parameter Vector Helpers

A ParamVector is a flat float64 numpy array holding every trainable weight
(policy and value networks concatenated, or an OCO iterate). The helpers here
are the shared input checks used by every optimizer and loss.
"""

import math

import numpy as np
import numpy.typing as npt

from app.core.exceptions import DimensionMismatchError, ErrorMessages, InvalidInputError

ParamVector = npt.NDArray[np.float64]


def as_param_vector(values: npt.ArrayLike, name: str = "params") -> ParamVector:
    """Convert to a flat float64 array, rejecting anything that is not 1-D."""
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 1:
        raise DimensionMismatchError(f"{name} must be a flat vector, got shape {array.shape}")
    return array


def check_same_dims(reference: ParamVector, other: ParamVector, name: str = "grad") -> None:
    """Raise if `other` is not dimensioned like `reference`."""
    if reference.shape != other.shape:
        raise DimensionMismatchError(ErrorMessages.dim_mismatch(name, reference.shape, other.shape))


def check_finite(values: npt.ArrayLike, name: str = "grad") -> None:
    """Raise if any entry is NaN or infinite."""
    if not np.all(np.isfinite(values)):
        raise InvalidInputError(ErrorMessages.non_finite(name))


def check_finite_scalar(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(ErrorMessages.non_finite(name))
    return value
