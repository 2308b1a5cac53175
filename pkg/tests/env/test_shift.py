import numpy as np
import pytest
from pydantic import ValidationError

from app.env.config import EnvOptions
from app.env.shift import OBSERVATION_DIM, advance_schedule, make_schedule


def test_first_task_unperturbed(rng):
    schedule = make_schedule(EnvOptions(), rng)
    assert not schedule.current_offsets.any()
    assert schedule.task_index == 0


def test_first_task_perturbed_when_configured(rng):
    schedule = make_schedule(EnvOptions(perturb_first_task=True), rng)
    assert schedule.current_offsets.shape == (OBSERVATION_DIM,)
    assert schedule.current_offsets.any()


def test_resample_on_period_multiples(rng):
    schedule = make_schedule(EnvOptions(shift_period=5), rng)
    boundaries = []
    for _ in range(12):
        advance_schedule(schedule)
        boundaries.append(schedule.boundary)
    assert [i + 1 for i, b in enumerate(boundaries) if b] == [5, 10]
    assert schedule.task_index == 2
    assert schedule.global_step == 12


def test_offsets_piecewise_constant(rng):
    schedule = make_schedule(EnvOptions(shift_period=4), rng)
    seen = []
    for _ in range(12):
        advance_schedule(schedule)
        seen.append(schedule.current_offsets.copy())
    for start in (3, 7):
        block = seen[start : start + 4]
        assert all(np.array_equal(block[0], offsets) for offsets in block)
    assert not np.array_equal(seen[3], seen[7])


@pytest.mark.parametrize("signed", [True, False])
def test_offset_range(rng, signed):
    schedule = make_schedule(EnvOptions(offset_range=1.5, signed_offsets=signed), rng)
    draws = np.array([schedule.draw_offsets() for _ in range(500)])
    assert np.all(np.abs(draws) <= 1.5)
    assert (draws.min() < 0) == signed


def test_zero_range_never_perturbs(rng):
    schedule = make_schedule(EnvOptions(shift_period=1, offset_range=0.0), rng)
    for _ in range(3):
        advance_schedule(schedule)
    assert schedule.task_index == 3
    assert not schedule.current_offsets.any()


def test_invalid_period():
    with pytest.raises(ValidationError):
        EnvOptions(shift_period=0)
