import pytest
from pydantic import ValidationError

from app.harness.config import (
    CONTROL_SEEDS,
    ExperimentConfig,
    ExperimentKind,
    HarnessSettings,
    SimplifiedOptions,
    get_harness_settings,
)
from app.nn.config import Activation
from app.optim.config import LAMBDA_GRID, WEIGHT_DECAY_GRID, OptimizerKind


def test_defaults():
    config = ExperimentConfig()
    assert config.experiment is ExperimentKind.TRAC
    assert config.seeds == list(range(CONTROL_SEEDS))
    assert config.ppo.steps_per_update == 800


@pytest.mark.parametrize(
    "kind, names, optimizer",
    [
        (ExperimentKind.TRAC, ["trac"], OptimizerKind.TRAC),
        (ExperimentKind.ADAM, ["adam"], OptimizerKind.ADAM),
        (ExperimentKind.WARMSTART_ADAM, ["adam"], OptimizerKind.ADAM),
        (ExperimentKind.CRELU_ADAM, ["crelu_adam"], OptimizerKind.ADAM),
        (ExperimentKind.PRIVILEGED_RESET, ["privileged_reset"], OptimizerKind.PRIVILEGED_RESET),
        (ExperimentKind.WARMSTART_TRAC, ["warmstart_trac"], OptimizerKind.WARMSTART_TRAC),
    ],
)
def test_single_arm_variants(kind, names, optimizer):
    variants = ExperimentConfig(experiment=kind).variants()
    assert [v.name for v in variants] == names
    assert variants[0].optimizer_kind is optimizer


def test_crelu_only_changes_activation():
    config = ExperimentConfig(experiment=ExperimentKind.CRELU_ADAM)
    (variant,) = config.variants()
    assert variant.training.network.activation is Activation.CRELU
    assert config.network.activation is Activation.RELU


def test_l2_sweep_variants():
    variants = ExperimentConfig(experiment=ExperimentKind.L2_SWEEP).variants()
    assert [v.training.optimizer.l2_lambda for v in variants] == list(LAMBDA_GRID)
    assert all(v.optimizer_kind is OptimizerKind.L2_INIT for v in variants)
    assert variants[0].name == f"lambda={LAMBDA_GRID[0]:g}"


def test_weight_decay_sweep_variants():
    variants = ExperimentConfig(experiment=ExperimentKind.WEIGHT_DECAY_SWEEP).variants()
    assert [v.training.optimizer.weight_decay for v in variants] == list(WEIGHT_DECAY_GRID)
    assert all(v.optimizer_kind is OptimizerKind.ADAMW for v in variants)


@pytest.mark.parametrize("kind", [ExperimentKind.OCO_BENCH, ExperimentKind.SIMPLIFIED_EQUIVALENCE])
def test_non_control_kinds(kind):
    assert not kind.is_control
    assert ExperimentConfig(experiment=kind).variants() == []


def test_budget_below_one_update():
    with pytest.raises(ValidationError):
        ExperimentConfig(total_env_steps=100)
    ExperimentConfig(experiment=ExperimentKind.OCO_BENCH, total_env_steps=100)


def test_degenerate_initial_scale():
    with pytest.raises(ValidationError):
        SimplifiedOptions(initial_S=0.0)


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("TRAC_OUTPUT_ROOT", "/tmp/elsewhere")
    assert HarnessSettings().output_root == "/tmp/elsewhere"
    get_harness_settings.cache_clear()
    try:
        assert get_harness_settings().output_root == "/tmp/elsewhere"
    finally:
        get_harness_settings.cache_clear()
