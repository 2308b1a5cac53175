"""
PPO Loss Module

Clipped surrogate, value and entropy terms with their exact gradient over the
concatenated policy+value parameters:

    loss = -mean(min(rho*A, clip(rho, 1-eps, 1+eps)*A))
           + value_coeff * mean((V - R)^2)
           - entropy_coeff * mean(H)

with rho = exp(log pi_new(a) - log pi_behavior(a)).
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.core.exceptions import ErrorMessages, NonFiniteLossError
from app.core.types import ParamVector
from app.nn.policy import ActorCritic
from app.ppo.config import PpoConfig


class Minibatch(BaseModel):
    """Slice of a rollout used for one optimizer step."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    observations: np.ndarray
    actions: np.ndarray
    old_log_probs: np.ndarray
    advantages: np.ndarray
    returns: np.ndarray


class PpoLoss(BaseModel):
    """Loss value and its components."""

    total: float
    policy: float
    value: float
    entropy: float
    clip_fraction: float


def clipped_surrogate(
    ratio: np.ndarray, advantages: np.ndarray, clip_eps: float
) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample min(rho*A, clip(rho)*A) and its derivative with respect to rho.

    The derivative is A where the unclipped branch is selected and 0 where the
    clipped branch is strictly smaller.
    """
    clipped = np.clip(ratio, 1.0 - clip_eps, 1.0 + clip_eps)
    unclipped_obj = ratio * advantages
    clipped_obj = clipped * advantages
    objective = np.minimum(unclipped_obj, clipped_obj)
    d_ratio = np.where(unclipped_obj <= clipped_obj, advantages, 0.0)
    return objective, d_ratio


def _check_term(term: str, value: float) -> None:
    if not math.isfinite(value):
        raise NonFiniteLossError(ErrorMessages.non_finite_loss(term, value))


def ppo_loss_and_grad(
    model: ActorCritic, params: ParamVector, minibatch: Minibatch, cfg: PpoConfig
) -> tuple[PpoLoss, ParamVector]:
    """PPO loss on one minibatch and its gradient.

    Raises:
        NonFiniteLossError: If any term is NaN or infinite; the message names it
    """
    n = minibatch.actions.shape[0]
    dist = model.distribution(params, minibatch.observations)
    values = model.value(params, minibatch.observations)

    new_log_probs = dist.log_prob(minibatch.actions)
    with np.errstate(over="ignore"):
        ratio = np.exp(new_log_probs - minibatch.old_log_probs)
    objective, d_ratio = clipped_surrogate(ratio, minibatch.advantages, cfg.clip_eps)
    entropy = dist.entropy

    policy_loss = -float(np.mean(objective))
    value_loss = float(np.mean((values - minibatch.returns) ** 2))
    entropy_mean = float(np.mean(entropy))
    _check_term("policy", policy_loss)
    _check_term("value", value_loss)
    _check_term("entropy", entropy_mean)
    total = policy_loss + cfg.value_coeff * value_loss - cfg.entropy_coeff * entropy_mean
    _check_term("total", total)

    # d(policy_loss)/d(log pi) = -(1/n) * dObj/drho * rho
    d_log_prob = -(d_ratio * ratio) / n
    one_hot = np.zeros_like(dist.probs)
    one_hot[np.arange(n), minibatch.actions] = 1.0
    dlogits = d_log_prob[:, None] * (one_hot - dist.probs)
    # d(-c_e * mean H)/dlogits, using dH/dlogits = -p * (log p + H)
    dlogits += (cfg.entropy_coeff / n) * dist.probs * (dist.log_probs + entropy[:, None])
    dvalues = 2.0 * cfg.value_coeff * (values - minibatch.returns) / n

    grad = model.backward(params, minibatch.observations, dlogits, dvalues)
    clip_fraction = float(np.mean(np.abs(ratio - 1.0) > cfg.clip_eps))
    return (
        PpoLoss(
            total=total,
            policy=policy_loss,
            value=value_loss,
            entropy=entropy_mean,
            clip_fraction=clip_fraction,
        ),
        grad,
    )
