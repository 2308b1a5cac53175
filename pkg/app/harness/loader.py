"""
Experiment Loader Module

Experiment files are markdown documents whose YAML frontmatter holds the
ExperimentConfig fields and whose body holds free-text notes. Loading and
dumping are inverse operations.
"""

from pathlib import Path

import frontmatter
from pydantic import ValidationError
from yaml import YAMLError

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.harness.config import ExperimentConfig


def parse_experiment(text: str) -> tuple[ExperimentConfig, str]:
    """Parse an experiment document into its configuration and notes.

    Raises:
        ConfigurationError: If the frontmatter is malformed or fails validation
    """
    try:
        post = frontmatter.loads(text)
    except YAMLError as exc:
        raise ConfigurationError(ErrorMessages.invalid_config("frontmatter", str(exc))) from exc
    try:
        config = ExperimentConfig.model_validate(post.metadata)
    except ValidationError as exc:
        raise ConfigurationError(ErrorMessages.invalid_config("experiment", str(exc))) from exc
    return config, post.content


def load_experiment(path: str | Path) -> tuple[ExperimentConfig, str]:
    """Read and validate an experiment file.

    Raises:
        ConfigurationError: If the file is missing or invalid
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Experiment file not found: {path}")
    return parse_experiment(path.read_text())


def dump_experiment(config: ExperimentConfig, notes: str = "") -> str:
    """Serialize to the experiment file format."""
    post = frontmatter.Post(notes, **config.model_dump(mode="json"))
    return frontmatter.dumps(post, sort_keys=False) + "\n"


def write_experiment(path: str | Path, config: ExperimentConfig, notes: str = "") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_experiment(config, notes))
    return path
