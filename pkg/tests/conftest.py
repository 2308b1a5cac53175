"""Shared fixtures and oracles for the test suite."""

from decimal import Decimal, localcontext

import numpy as np
import pytest

from app.harness.config import ExperimentConfig, ExperimentKind
from app.ppo.config import PpoConfig

_PI = Decimal("3.14159265358979323846264338327950288419716939937510582097494459")


def erfi_series_oracle(x: float, precision: int = 60) -> float:
    """Maclaurin series of erfi summed in extended precision."""
    with localcontext() as ctx:
        ctx.prec = precision
        z = Decimal(repr(float(x)))
        z2 = z * z
        power = z
        total = z
        k = 0
        while True:
            k += 1
            power = power * z2 / k
            term = power / (2 * k + 1)
            total += term
            if term == 0 or abs(term) < abs(total) * Decimal("1e-45"):
                break
        return float(2 * total / _PI.sqrt())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_ppo() -> PpoConfig:
    """Small PPO settings so a full update runs in well under a second."""
    return PpoConfig(steps_per_update=64, minibatch_size=16, epochs_per_update=2)


@pytest.fixture
def tiny_experiment(tiny_ppo: PpoConfig):
    """Factory for control experiments of two updates on a small network."""

    def build(
        kind: ExperimentKind = ExperimentKind.TRAC, seeds: list[int] | None = None, **updates
    ):
        data = {
            "experiment": kind,
            "seeds": seeds or [0],
            "total_env_steps": 2 * tiny_ppo.steps_per_update,
            "ppo": tiny_ppo.model_dump(),
            "network": {"hidden_sizes": [8]},
            "env": {"shift_period": 50},
            **updates,
        }
        return ExperimentConfig.model_validate(data)

    return build
