"""
PPO Trainer Module

One PPO update over a collected rollout, and the lifelong driver that
alternates collection and updates on the shifting CartPole while recording
rewards and the TRAC scaling trace.
"""

import time
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel

from app.core.exceptions import ConfigurationError, ErrorMessages
from app.core.schema.record import RunRecord, RunStatus, ScalingRow, UpdateRow, summarize
from app.core.seeding import (
    ENV_STREAM,
    INIT_STREAM,
    POLICY_STREAM,
    REINIT_STREAM,
    SCHEDULE_STREAM,
    SHUFFLE_STREAM,
    derive_rng,
)
from app.core.types import ParamVector
from app.env.cartpole import N_ACTIONS, ShiftedCartPole
from app.env.shift import OBSERVATION_DIM, make_schedule
from app.logging.config import PPO
from app.logging.factory import log_scope, logger
from app.nn.policy import ActorCritic
from app.optim.base import Optimizer
from app.optim.config import OptimizerKind
from app.optim.factory import OptimizerFactory
from app.ppo.config import PpoConfig, TrainingConfig
from app.ppo.loss import Minibatch, ppo_loss_and_grad
from app.ppo.rollout import RolloutBatch, collect_rollout, compute_advantages


class UpdateStats(BaseModel):
    """Summary of one update."""

    mean_loss: float
    optimizer_steps: int
    clip_fraction: float


def normalize_advantages(advantages: np.ndarray, eps: float = 1e-8) -> np.ndarray:
    """Zero mean, unit standard deviation."""
    return (advantages - advantages.mean()) / (advantages.std() + eps)


def train_update(
    model: ActorCritic,
    params: ParamVector,
    optimizer: Optimizer,
    batch: RolloutBatch,
    cfg: PpoConfig,
    rng: np.random.Generator,
    on_step: Callable[[Optimizer], None] | None = None,
) -> tuple[ParamVector, UpdateStats]:
    """Run `epochs_per_update` passes of shuffled minibatches; one optimizer step each.

    Args:
        model: Actor-critic architecture
        params: Parameters at the start of the update
        optimizer: Any Optimizer; stepped once per minibatch
        batch: Rollout with advantages and returns computed
        cfg: PPO hyperparameters
        rng: Shuffle generator
        on_step: Called after every optimizer step (scaling trace recording)

    Returns:
        Updated parameters and update statistics
    """
    if batch.advantages is None or batch.returns is None:
        raise ConfigurationError(ErrorMessages.invalid_config("batch", "advantages not computed"))
    advantages = normalize_advantages(batch.advantages, cfg.advantage_eps)

    losses, clip_fractions = [], []
    for _ in range(cfg.epochs_per_update):
        order = rng.permutation(len(batch))
        for start in range(0, len(batch), cfg.minibatch_size):
            index = order[start : start + cfg.minibatch_size]
            minibatch = Minibatch(
                observations=batch.observations[index],
                actions=batch.actions[index],
                old_log_probs=batch.log_probs[index],
                advantages=advantages[index],
                returns=batch.returns[index],
            )
            loss, grad = ppo_loss_and_grad(model, params, minibatch, cfg)
            params = optimizer.step(params, grad)
            losses.append(loss.total)
            clip_fractions.append(loss.clip_fraction)
            if on_step is not None:
                on_step(optimizer)

    return params, UpdateStats(
        mean_loss=float(np.mean(losses)),
        optimizer_steps=len(losses),
        clip_fraction=float(np.mean(clip_fractions)),
    )


def _window_reward(batch: RolloutBatch) -> float:
    if batch.episodes:
        return float(np.mean([episode.episode_return for episode in batch.episodes]))
    return batch.running_return


def lifelong_train(
    config: TrainingConfig,
    optimizer_kind: OptimizerKind | str,
    total_env_steps: int,
    seed: int,
    experiment: str = "custom",
    variant: str = "default",
) -> RunRecord:
    """Alternate rollout collection and PPO updates over the shifting environment.

    Every source of randomness is a named stream derived from `seed`.

    Raises:
        ConfigurationError: If total_env_steps < steps_per_update
    """
    ppo = config.ppo
    if total_env_steps < ppo.steps_per_update:
        raise ConfigurationError(
            ErrorMessages.invalid_config(
                "total_env_steps", f"{total_env_steps} < steps_per_update {ppo.steps_per_update}"
            )
        )
    with log_scope(service=PPO):
        return _run_lifelong(config, optimizer_kind, total_env_steps, seed, experiment, variant)


def _run_lifelong(
    config: TrainingConfig,
    optimizer_kind: OptimizerKind | str,
    total_env_steps: int,
    seed: int,
    experiment: str,
    variant: str,
) -> RunRecord:
    ppo = config.ppo
    started = time.perf_counter()

    env_rng = derive_rng(seed, ENV_STREAM)
    policy_rng = derive_rng(seed, POLICY_STREAM)
    shuffle_rng = derive_rng(seed, SHUFFLE_STREAM)
    reinit_rng = derive_rng(seed, REINIT_STREAM)

    model = ActorCritic(OBSERVATION_DIM, N_ACTIONS, config.network)
    params = model.init(derive_rng(seed, INIT_STREAM))
    schedule = make_schedule(config.env, derive_rng(seed, SCHEDULE_STREAM))
    env = ShiftedCartPole.from_options(config.env, schedule)
    optimizer = OptimizerFactory(optimizer_kind, config.optimizer).create(
        params, reinit=lambda: model.init(reinit_rng)
    )

    record = RunRecord(experiment=experiment, variant=variant, seed=seed)
    n_updates = total_env_steps // ppo.steps_per_update
    logger.info("Starting %s: %d params, %d updates", optimizer.name, model.param_count, n_updates)

    optimizer_steps = 0
    for update in range(1, n_updates + 1):
        batch, params = collect_rollout(
            env,
            model,
            params,
            env_rng,
            policy_rng,
            ppo.steps_per_update,
            on_task_boundary=optimizer.on_task_boundary,
            episode_offset=len(record.episodes),
        )
        compute_advantages(batch, ppo.gamma, ppo.gae_lambda)

        def record_scaling(opt: Optimizer, update: int = update) -> None:
            nonlocal optimizer_steps
            optimizer_steps += 1
            if opt.scaling is not None:
                record.scaling.append(
                    ScalingRow(
                        step=optimizer_steps,
                        update=update,
                        task_index=env.schedule.task_index,
                        S=opt.scaling,
                        s=opt.tuner_outputs,
                    )
                )

        params, stats = train_update(
            model, params, optimizer, batch, ppo, shuffle_rng, record_scaling
        )

        record.episodes.extend(batch.episodes)
        record.tasks.extend(task.model_copy(update={"update": update}) for task in batch.tasks)
        row = UpdateRow(
            update=update,
            env_step=env.schedule.global_step,
            task_index=batch.task_index,
            mean_episode_reward=_window_reward(batch),
            episodes_completed=len(batch.episodes),
            loss=stats.mean_loss,
            S=optimizer.scaling,
            optimizer_steps=optimizer_steps,
        )
        record.updates.append(row)
        logger.info(
            "Update %d task %d: mean episode reward %.1f, loss %.4f, S %s",
            update,
            row.task_index,
            row.mean_episode_reward,
            row.loss,
            "-" if row.S is None else f"{row.S:.3g}",
        )

    record.status = RunStatus.COMPLETED
    record.summary = summarize(record, wall_time=time.perf_counter() - started)
    return record
