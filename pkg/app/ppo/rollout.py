"""
Rollout Module

Fixed-length on-policy data collection over the shifting CartPole and
generalized advantage estimation. Episodes continue across rollout windows;
the shift schedule advances once per environment step.
"""

from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import ErrorMessages, InvalidInputError
from app.core.schema.record import EpisodeRow, TaskRow
from app.core.types import ParamVector
from app.env.cartpole import ShiftedCartPole
from app.env.shift import advance_schedule
from app.logging.factory import logger
from app.nn.policy import ActorCritic


class RolloutBatch(BaseModel):
    """One rollout window; every array has length steps_per_update."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    observations: np.ndarray
    actions: np.ndarray
    log_probs: np.ndarray = Field(
        description="Behavior log-probabilities recorded at collection time"
    )
    rewards: np.ndarray
    values: np.ndarray
    dones: np.ndarray = Field(description="Episode ended at this step (failure or cap)")
    bootstrap_values: np.ndarray = Field(
        description="Value of the successor state; 0 after a failure, V(final state) after a cap"
    )
    advantages: np.ndarray | None = None
    returns: np.ndarray | None = None
    episodes: list[EpisodeRow] = Field(
        default_factory=list, description="Episodes finished in this window"
    )
    running_return: float = Field(
        default=0.0, description="Return of the episode still in progress"
    )
    tasks: list[TaskRow] = Field(
        default_factory=list, description="Task boundaries crossed in this window"
    )
    task_index: int = 0

    def __len__(self) -> int:
        return int(self.actions.shape[0])


def collect_rollout(
    env: ShiftedCartPole,
    model: ActorCritic,
    params: ParamVector,
    env_rng: np.random.Generator,
    policy_rng: np.random.Generator,
    steps: int,
    on_task_boundary: Callable[[ParamVector], ParamVector] | None = None,
    episode_offset: int = 0,
) -> tuple[RolloutBatch, ParamVector]:
    """Collect exactly `steps` transitions with the current policy.

    Args:
        env: Environment (continues its current episode if one is running)
        model: Actor-critic architecture
        params: Flat policy+value parameters
        env_rng: Generator for episode resets
        policy_rng: Generator for action sampling
        steps: Window length
        on_task_boundary: Called with the parameters when the schedule resamples;
            its return value replaces them (privileged reset)
        episode_offset: Number of episodes finished before this window

    Returns:
        The batch and the parameters in force at the end of the window

    When a boundary callback replaces the parameters, the behavior log-probabilities,
    values and truncation bootstraps of the earlier steps are re-evaluated under the
    parameters in force at the end of the window, which are the ones the update
    starts from.
    """
    observations = np.empty((steps, env.schedule.current_offsets.shape[0]))
    actions = np.empty(steps, dtype=np.int64)
    log_probs = np.empty(steps)
    rewards = np.empty(steps)
    values = np.empty(steps)
    dones = np.zeros(steps, dtype=bool)
    bootstrap = np.empty(steps)
    episodes: list[EpisodeRow] = []
    tasks: list[TaskRow] = []
    truncated_successors: dict[int, np.ndarray] = {}
    last_swap = -1

    obs = env.observe() if not env.done else env.reset(env_rng)
    for t in range(steps):
        action, log_prob, value = model.act(params, obs, policy_rng)
        observations[t], actions[t], log_probs[t], values[t] = obs, action, log_prob, value

        _, next_obs, reward, done = env.step(action)
        rewards[t] = reward
        dones[t] = done

        if done and env.truncated:
            truncated_successors[t] = next_obs
            bootstrap[t] = model.value(params, next_obs)
        elif done:
            bootstrap[t] = 0.0

        advance_schedule(env.schedule)
        if env.schedule.boundary:
            tasks.append(
                TaskRow(task_index=env.schedule.task_index, env_step=env.schedule.global_step)
            )
            logger.debug(
                "Task %d begins at env step %d", env.schedule.task_index, env.schedule.global_step
            )
            if on_task_boundary is not None:
                params = on_task_boundary(params)
                last_swap = t

        if done:
            episodes.append(
                EpisodeRow(
                    episode=episode_offset + len(episodes) + 1,
                    env_step=env.schedule.global_step,
                    task_index=env.episode_start_task,
                    episode_return=env.episode_return,
                    length=env.state.step_in_episode,
                    truncated=env.truncated,
                )
            )
            obs = env.reset(env_rng)
        else:
            obs = env.observe()
            if t == steps - 1:
                bootstrap[t] = model.value(params, obs)

    if last_swap >= 0:
        _reevaluate(model, params, observations, actions, log_probs, values, last_swap + 1)
        for t, successor in truncated_successors.items():
            if t <= last_swap:
                bootstrap[t] = model.value(params, successor)

    # Inside the window a non-terminal successor's value is the next recorded value
    continuing = ~dones[:-1]
    bootstrap[:-1][continuing] = values[1:][continuing]

    return (
        RolloutBatch(
            observations=observations,
            actions=actions,
            log_probs=log_probs,
            rewards=rewards,
            values=values,
            dones=dones,
            bootstrap_values=bootstrap,
            episodes=episodes,
            running_return=env.episode_return,
            tasks=tasks,
            task_index=env.schedule.task_index,
        ),
        params,
    )


def _reevaluate(
    model: ActorCritic,
    params: ParamVector,
    observations: np.ndarray,
    actions: np.ndarray,
    log_probs: np.ndarray,
    values: np.ndarray,
    stale: int,
) -> None:
    """Overwrite the first `stale` log-probabilities and values in place."""
    log_probs[:stale] = model.distribution(params, observations[:stale]).log_prob(actions[:stale])
    values[:stale] = model.value(params, observations[:stale])
    logger.debug("Re-evaluated %d steps collected before a parameter reset", stale)


def compute_advantages(batch: RolloutBatch, gamma: float, gae_lambda: float) -> RolloutBatch:
    """GAE(gamma, lambda), cut at episode ends; returns = advantages + values.

    The recursion never crosses a done step: a failure contributes no bootstrap,
    a capped episode bootstraps from V(final state).

    Raises:
        InvalidInputError: If the resulting advantages are not finite
    """
    deltas = batch.rewards + gamma * batch.bootstrap_values - batch.values
    advantages = np.zeros_like(deltas)
    running = 0.0
    for t in reversed(range(len(batch))):
        running = deltas[t] + gamma * gae_lambda * (0.0 if batch.dones[t] else running)
        advantages[t] = running
    if not np.all(np.isfinite(advantages)):
        raise InvalidInputError(ErrorMessages.non_finite("advantages"))

    batch.advantages = advantages
    batch.returns = advantages + batch.values
    return batch
