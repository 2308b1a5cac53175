"""
CartPole Module

Native cart-pole physics (force +-10 N, gravity 9.8, cart 1.0 kg, pole 0.1 kg,
half-length 0.5 m, explicit Euler with tau = 0.02 s, reward +1 per step) and
the lifelong wrapper that adds the shift schedule's offsets to every
observation.
"""

import math

import numpy as np
from pydantic import BaseModel, Field

from app.core.exceptions import ConfigurationError, ProtocolError
from app.env.config import EPISODE_CAP, EnvOptions
from app.env.shift import ShiftSchedule

GRAVITY = 9.8
MASS_CART = 1.0
MASS_POLE = 0.1
TOTAL_MASS = MASS_CART + MASS_POLE
HALF_LENGTH = 0.5
POLE_MASS_LENGTH = MASS_POLE * HALF_LENGTH
FORCE_MAG = 10.0
TAU = 0.02

X_THRESHOLD = 2.4
THETA_THRESHOLD = 12 * 2 * math.pi / 360
RESET_BOUND = 0.05

N_ACTIONS = 2


class CartPoleState(BaseModel):
    """Raw (unperturbed) physical state."""

    x: float = Field(description="Cart position (m)")
    x_dot: float = Field(description="Cart velocity (m/s)")
    theta: float = Field(description="Pole angle (rad)")
    theta_dot: float = Field(description="Pole angular velocity (rad/s)")
    step_in_episode: int = 0

    @property
    def failed(self) -> bool:
        """Cart left the track or pole fell past 12 degrees."""
        return abs(self.x) > X_THRESHOLD or abs(self.theta) > THETA_THRESHOLD

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.x_dot, self.theta, self.theta_dot])


def cartpole_dynamics(state: CartPoleState, action: int) -> CartPoleState:
    """Advance the physics by one explicit Euler step of length TAU."""
    if action not in (0, 1):
        raise ConfigurationError(f"CartPole action must be 0 or 1, got {action}")
    force = FORCE_MAG if action == 1 else -FORCE_MAG
    cos_theta = math.cos(state.theta)
    sin_theta = math.sin(state.theta)

    temp = (force + POLE_MASS_LENGTH * state.theta_dot**2 * sin_theta) / TOTAL_MASS
    theta_acc = (GRAVITY * sin_theta - cos_theta * temp) / (
        HALF_LENGTH * (4.0 / 3.0 - MASS_POLE * cos_theta**2 / TOTAL_MASS)
    )
    x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos_theta / TOTAL_MASS

    return CartPoleState(
        x=state.x + TAU * state.x_dot,
        x_dot=state.x_dot + TAU * x_acc,
        theta=state.theta + TAU * state.theta_dot,
        theta_dot=state.theta_dot + TAU * theta_acc,
        step_in_episode=state.step_in_episode + 1,
    )


class ShiftedCartPole:
    """CartPole whose observations are offset by the current shift schedule.

    The environment tracks the running episode so that episodes continue
    across rollout windows.
    """

    def __init__(self, schedule: ShiftSchedule, episode_cap: int = EPISODE_CAP):
        self.schedule = schedule
        self.episode_cap = episode_cap
        self.state: CartPoleState | None = None
        self.done = True
        self.truncated = False
        self.episode_return = 0.0
        self.episode_start_step = 0
        self.episode_start_task = 0

    @classmethod
    def from_options(cls, options: EnvOptions, schedule: ShiftSchedule) -> "ShiftedCartPole":
        return cls(schedule, episode_cap=options.episode_cap)

    def observe(self, state: CartPoleState | None = None) -> np.ndarray:
        """Raw state plus the schedule's current offsets."""
        state = state or self.state
        if state is None:
            raise ProtocolError("Environment must be reset before it can be observed")
        return state.as_array() + self.schedule.current_offsets

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        """Start a new episode with every state component uniform on [-0.05, 0.05]."""
        x, x_dot, theta, theta_dot = rng.uniform(-RESET_BOUND, RESET_BOUND, size=4)
        self.state = CartPoleState(x=x, x_dot=x_dot, theta=theta, theta_dot=theta_dot)
        self.done = False
        self.truncated = False
        self.episode_return = 0.0
        self.episode_start_step = self.schedule.global_step
        self.episode_start_task = self.schedule.task_index
        return self.observe()

    def step(self, action: int) -> tuple[CartPoleState, np.ndarray, float, bool]:
        """Apply an action.

        Returns:
            (next raw state, perturbed observation, reward, done). A done caused
            by the episode cap rather than failure sets `self.truncated`.

        Raises:
            ProtocolError: If the episode is already finished
        """
        if self.done or self.state is None:
            raise ProtocolError("Cannot step a finished episode; call reset() first")

        self.state = cartpole_dynamics(self.state, action)
        reward = 1.0
        failed = self.state.failed
        capped = self.state.step_in_episode >= self.episode_cap
        self.done = failed or capped
        self.truncated = capped and not failed
        self.episode_return += reward
        return self.state, self.observe(), reward, self.done
