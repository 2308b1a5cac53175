"""
Imaginary Error Function Module

Native erfi(x) = (2/sqrt(pi)) * sum_k x^(2k+1) / (k! (2k+1)) used by the
tuner's decision rule. The Maclaurin series has only same-signed terms for a
real argument, so summing it directly loses no precision; the argument is
clamped to [-clamp_bound, clamp_bound] because erfi grows like exp(x^2) and
overflows doubles near |x| = 26.6.
"""

import math
from functools import lru_cache
from typing import Self, overload

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, ValidationError, model_validator

from app.core.exceptions import InvalidInputError
from app.core.types import check_finite

DEFAULT_CLAMP_BOUND = 6.0

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_MAX_TERMS = 4096
_TAIL_TOLERANCE = 1e-17


class ErfiDomain(BaseModel):
    """Range of arguments evaluated exactly; larger magnitudes saturate."""

    clamp_bound: float = Field(
        default=DEFAULT_CLAMP_BOUND,
        gt=0.0,
        description="Maximum |argument| accepted before saturation",
    )

    @model_validator(mode="after")
    def validate_finite_at_bound(self) -> Self:
        """erfi(clamp_bound) must be representable in double precision"""
        if not math.isfinite(_series_scalar(self.clamp_bound)):
            raise ValueError(f"erfi({self.clamp_bound}) overflows double precision")
        return self


def _series(z: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Sum the Maclaurin series until every tail term is below the tolerance.

    Raises:
        InvalidInputError: If the term cap is reached before the tail test passes
    """
    z2 = z * z
    power = z.copy()  # z^(2k+1) / k!
    total = z.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, _MAX_TERMS):
            power = power * z2 / k
            term = power / (2 * k + 1)
            total = total + term
            if np.all(np.abs(term) <= _TAIL_TOLERANCE * np.abs(total)):
                break
        else:
            raise InvalidInputError(_not_converged(float(np.abs(z).max())))
    return _TWO_OVER_SQRT_PI * total


def _series_scalar(z: float) -> float:
    """Scalar path of `_series`; the tuner calls erfi once per step."""
    z2 = z * z
    power = z
    total = z
    for k in range(1, _MAX_TERMS):
        power = power * z2 / k
        term = power / (2 * k + 1)
        total = total + term
        if abs(term) <= _TAIL_TOLERANCE * abs(total):
            break
    else:
        raise InvalidInputError(_not_converged(abs(z)))
    return _TWO_OVER_SQRT_PI * total


def _not_converged(magnitude: float) -> str:
    return f"erfi series did not converge within {_MAX_TERMS} terms at |x| = {magnitude}"


@overload
def erfi(x: float, clamp_bound: float = ...) -> float: ...
@overload
def erfi(x: npt.NDArray[np.float64], clamp_bound: float = ...) -> npt.NDArray[np.float64]: ...


def erfi(x, clamp_bound: float = DEFAULT_CLAMP_BOUND):
    """Imaginary error function, saturating outside [-clamp_bound, clamp_bound].

    Args:
        x: Finite scalar or array argument
        clamp_bound: Saturation bound; arguments beyond it evaluate as erfi(+-clamp_bound)

    Returns:
        erfi(x) with the same scalar/array shape as the input

    Raises:
        InvalidInputError: If any argument is NaN or infinite
    """
    array = np.asarray(x, dtype=np.float64)
    check_finite(array, "erfi argument")
    if array.ndim == 0:
        return _series_scalar(min(max(float(array), -clamp_bound), clamp_bound))
    return _series(np.clip(array, -clamp_bound, clamp_bound))


@lru_cache
def erfi_inv_sqrt2() -> float:
    """erfi(1/sqrt(2)), the tuner's normalizing constant."""
    return erfi(1.0 / math.sqrt(2.0))


def erfi_norm(x, clamp_bound: float = DEFAULT_CLAMP_BOUND):
    """erfi(x) / erfi(1/sqrt(2)), so that erfi_norm(1/sqrt(2)) == 1."""
    return erfi(x, clamp_bound) / erfi_inv_sqrt2()


def checked_clamp_bound(clamp_bound: float) -> float:
    """Validate a saturation bound through ErfiDomain; for use inside field validators.

    Raises:
        ValueError: If the bound is not positive or erfi overflows at it
    """
    try:
        return ErfiDomain(clamp_bound=clamp_bound).clamp_bound
    except ValidationError as exc:
        raise ValueError(f"invalid erfi clamp bound {clamp_bound}: {exc}") from exc
