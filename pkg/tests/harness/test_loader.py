from pathlib import Path

import pytest

from app.core.exceptions import ConfigurationError
from app.harness.config import ExperimentConfig, ExperimentKind
from app.harness.loader import dump_experiment, load_experiment, parse_experiment, write_experiment

EXPERIMENTS_DIR = Path(__file__).parents[2] / "experiments"

DOCUMENT = """---
experiment: l2_sweep
seeds: [1, 2]
total_env_steps: 1600
optimizer:
  lambda_grid: [0.1, 1.0]
---
Short sweep.
"""


def test_parse():
    config, notes = parse_experiment(DOCUMENT)
    assert config.experiment is ExperimentKind.L2_SWEEP
    assert config.seeds == [1, 2]
    assert config.optimizer.lambda_grid == [0.1, 1.0]
    assert config.ppo.minibatch_size == 32
    assert notes == "Short sweep."


def test_dump_then_parse_is_identity():
    config, notes = parse_experiment(DOCUMENT)
    again, again_notes = parse_experiment(dump_experiment(config, notes))
    assert again == config
    assert again_notes == notes


def test_empty_frontmatter_uses_defaults():
    config, notes = parse_experiment("Notes only.\n")
    assert config == ExperimentConfig()
    assert notes == "Notes only."


@pytest.mark.parametrize(
    "text",
    [
        "---\nexperiment: [unclosed\n---\n",
        "---\nexperiment: mechanic\n---\n",
        "---\nseeds: []\n---\n",
        "---\nppo:\n  clip_eps: 2.0\n---\n",
    ],
)
def test_invalid_documents(text):
    with pytest.raises(ConfigurationError):
        parse_experiment(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_experiment(tmp_path / "absent.md")


def test_write_and_load(tmp_path):
    config = ExperimentConfig(experiment=ExperimentKind.OCO_BENCH, seeds=[0])
    path = write_experiment(tmp_path / "nested" / "oco.md", config, "bench")
    assert load_experiment(path) == (config, "bench")


@pytest.mark.parametrize("path", sorted(EXPERIMENTS_DIR.glob("*.md")), ids=lambda p: p.stem)
def test_shipped_experiments_load(path):
    config, _ = load_experiment(path)
    assert config.experiment.value == path.stem
