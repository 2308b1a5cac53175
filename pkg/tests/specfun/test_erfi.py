import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import InvalidInputError
from app.specfun.erfi import DEFAULT_CLAMP_BOUND, ErfiDomain, erfi, erfi_inv_sqrt2, erfi_norm
from tests.conftest import erfi_series_oracle

GRID = np.linspace(-6.0, 6.0, 1000)


def test_erfi_zero():
    assert erfi(0.0) == 0.0


def test_erfi_is_odd():
    assert erfi(-0.3) == -erfi(0.3)
    assert np.array_equal(erfi(-GRID), -erfi(GRID))


def test_erfi_at_one():
    assert erfi(1.0) == pytest.approx(1.650425758797543, rel=1e-13)


def test_erfi_at_inverse_sqrt2_matches_oracle():
    expected = erfi_series_oracle(1.0 / math.sqrt(2.0))
    assert erfi_inv_sqrt2() == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.9534382692512607, rel=1e-15)


def test_erfi_matches_series_oracle_on_grid():
    values = erfi(GRID)
    oracle = np.array([erfi_series_oracle(x) for x in GRID])
    error = np.abs(values - oracle) / np.maximum(1.0, np.abs(oracle))
    assert error.max() <= 1e-12


def test_erfi_scalar_and_array_paths_agree():
    for x in (-5.5, -0.2, 0.7, 3.3):
        assert erfi(x) == pytest.approx(float(erfi(np.array([x]))[0]), rel=1e-15)


def test_erfi_is_monotone():
    assert np.all(np.diff(erfi(GRID)) > 0)


def test_erfi_saturates_beyond_clamp():
    at_bound = erfi(DEFAULT_CLAMP_BOUND)
    assert erfi(7.0) == at_bound
    assert erfi(100.0) == at_bound
    assert erfi(-100.0) == -at_bound
    assert math.isfinite(at_bound)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_erfi_rejects_non_finite(bad):
    with pytest.raises(InvalidInputError):
        erfi(bad)
    with pytest.raises(InvalidInputError):
        erfi(np.array([0.0, bad]))


def test_erfi_norm():
    assert erfi_norm(0.0) == 0.0
    assert erfi_norm(1.0 / math.sqrt(2.0)) == pytest.approx(1.0, rel=1e-15)
    assert erfi_norm(1.0) == pytest.approx(
        erfi_series_oracle(1.0) / erfi_series_oracle(1.0 / math.sqrt(2.0)), rel=1e-13
    )


def test_erfi_domain_validation():
    assert ErfiDomain().clamp_bound == DEFAULT_CLAMP_BOUND
    with pytest.raises(ValidationError):
        ErfiDomain(clamp_bound=0.0)
    with pytest.raises(ValidationError):
        ErfiDomain(clamp_bound=30.0)


@pytest.mark.parametrize("x", [12.0, 20.0, -20.0])
def test_erfi_converges_beyond_default_bound(x):
    assert erfi(x, clamp_bound=20.0) == pytest.approx(erfi_series_oracle(x), rel=1e-12)
    array = erfi(np.array([x, 0.5]), clamp_bound=20.0)
    assert array[0] == pytest.approx(erfi_series_oracle(x), rel=1e-12)


def test_erfi_domain_accepts_largest_finite_bounds():
    assert ErfiDomain(clamp_bound=20.0).clamp_bound == 20.0
    assert math.isfinite(erfi(26.0, clamp_bound=26.0))
