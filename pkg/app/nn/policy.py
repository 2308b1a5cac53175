"""
Policy Module

Categorical action head over the policy network's logits and the actor-critic
pair. Policy and value networks are separate MLPs whose parameters are
concatenated into one flat vector, so a single optimizer (and a single TRAC
scale S) governs both.
"""

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict

from app.core.exceptions import ErrorMessages, InvalidInputError
from app.core.types import ParamVector
from app.nn.config import NetworkOptions
from app.nn.mlp import MlpSpec, backward, forward, init_params


class Categorical(BaseModel):
    """Softmax distribution over discrete actions; batched along axis 0 when logits are 2-D."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    logits: np.ndarray
    probs: np.ndarray
    log_probs: np.ndarray

    @property
    def entropy(self) -> np.ndarray | float:
        value = -np.sum(self.probs * self.log_probs, axis=-1)
        return float(value) if np.ndim(value) == 0 else value

    def log_prob(self, actions: npt.ArrayLike) -> np.ndarray | float:
        actions = np.asarray(actions)
        if self.log_probs.ndim == 1:
            return float(self.log_probs[int(actions)])
        return np.take_along_axis(self.log_probs, actions.reshape(-1, 1), axis=1)[:, 0]

    def sample(self, rng: np.random.Generator) -> int:
        """Inverse-CDF draw for a single (1-D) distribution; consumes one uniform."""
        cdf = np.cumsum(self.probs)
        index = int(np.searchsorted(cdf, rng.random(), side="right"))
        return min(index, self.probs.shape[-1] - 1)


def categorical_head(logits: npt.ArrayLike) -> Categorical:
    """Stable softmax (max-subtracted) of the logits.

    Raises:
        InvalidInputError: If any logit is NaN or infinite
    """
    logits = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(logits)):
        raise InvalidInputError(ErrorMessages.non_finite("logits"))
    shifted = logits - logits.max(axis=-1, keepdims=True)
    log_norm = np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))
    log_probs = shifted - log_norm
    return Categorical(logits=logits, probs=np.exp(log_probs), log_probs=log_probs)


class ActorCritic:
    """Policy and value MLPs over one concatenated parameter vector."""

    def __init__(self, obs_dim: int, n_actions: int, options: NetworkOptions | None = None):
        options = options or NetworkOptions()
        self.policy_spec = MlpSpec(
            layer_sizes=[obs_dim, *options.hidden_sizes, n_actions], activation=options.activation
        )
        self.value_spec = MlpSpec(
            layer_sizes=[obs_dim, *options.hidden_sizes, 1], activation=options.activation
        )
        self.policy_size = self.policy_spec.param_count

    @property
    def param_count(self) -> int:
        return self.policy_size + self.value_spec.param_count

    def init(self, rng: np.random.Generator) -> ParamVector:
        """Fresh Xavier-uniform draw for both networks."""
        policy = init_params(self.policy_spec, rng)
        return np.concatenate([policy, init_params(self.value_spec, rng)])

    def split(self, params: ParamVector) -> tuple[ParamVector, ParamVector]:
        return params[: self.policy_size], params[self.policy_size :]

    def distribution(self, params: ParamVector, obs: npt.ArrayLike) -> Categorical:
        policy_params, _ = self.split(params)
        return categorical_head(forward(self.policy_spec, policy_params, obs))

    def value(self, params: ParamVector, obs: npt.ArrayLike) -> np.ndarray | float:
        _, value_params = self.split(params)
        out = forward(self.value_spec, value_params, obs)
        return float(out[0]) if out.ndim == 1 else out[:, 0]

    def act(
        self, params: ParamVector, obs: npt.ArrayLike, rng: np.random.Generator
    ) -> tuple[int, float, float]:
        """Sample an action for one observation.

        Returns:
            (action, behavior log-probability, value estimate)
        """
        dist = self.distribution(params, obs)
        action = dist.sample(rng)
        return action, dist.log_prob(action), self.value(params, obs)

    def backward(
        self,
        params: ParamVector,
        obs: np.ndarray,
        dlogits: np.ndarray,
        dvalues: np.ndarray,
    ) -> ParamVector:
        """Flat gradient given upstream gradients on the logits and the values."""
        policy_params, value_params = self.split(params)
        return np.concatenate(
            [
                backward(self.policy_spec, policy_params, obs, dlogits),
                backward(self.value_spec, value_params, obs, np.asarray(dvalues).reshape(-1, 1)),
            ]
        )
