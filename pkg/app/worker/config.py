"""
Worker Configuration

Settings for the process pool that executes seed-level runs. The CLI's
--workers flag overrides `workers` for a single invocation.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class WorkerConfig(BaseSettings):
    """Seed-level worker pool configuration."""

    workers: int = Field(default=1, ge=1, alias="TRAC_WORKERS")
    start_method: Literal["spawn", "fork", "forkserver"] = Field(
        default="spawn", alias="TRAC_WORKER_START_METHOD"
    )

    # --- Production Standards (hardcoded) ---
    max_tasks_per_child: int | None = None

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")


@lru_cache
def get_worker_config() -> WorkerConfig:
    """
    Get the worker configuration. Uses lru_cache to avoid repeated loading

    Returns:
        WorkerConfig: The worker configuration.
    """
    return WorkerConfig()
