import numpy as np
import pytest

from app.core.exceptions import ConfigurationError, ProtocolError
from app.env.cartpole import (
    THETA_THRESHOLD,
    X_THRESHOLD,
    CartPoleState,
    ShiftedCartPole,
    cartpole_dynamics,
)
from app.env.config import EnvOptions
from app.env.shift import make_schedule


def make_env(rng, **options) -> ShiftedCartPole:
    env_options = EnvOptions(**options)
    return ShiftedCartPole.from_options(env_options, make_schedule(env_options, rng))


class TestDynamics:
    def test_push_right_from_rest(self):
        state = cartpole_dynamics(CartPoleState(x=0.0, x_dot=0.0, theta=0.0, theta_dot=0.0), 1)
        # x_acc = 400/41 and theta_acc = -600/41 at rest with the force at +10 N
        assert state.x == 0.0 and state.theta == 0.0
        assert state.x_dot == pytest.approx(8 / 41, rel=1e-12)
        assert state.theta_dot == pytest.approx(-12 / 41, rel=1e-12)
        assert state.step_in_episode == 1

    def test_actions_are_mirror_images(self):
        rest = CartPoleState(x=0.0, x_dot=0.0, theta=0.0, theta_dot=0.0)
        left, right = cartpole_dynamics(rest, 0), cartpole_dynamics(rest, 1)
        assert left.x_dot == pytest.approx(-right.x_dot)
        assert left.theta_dot == pytest.approx(-right.theta_dot)

    def test_positions_use_previous_velocities(self):
        state = CartPoleState(x=0.1, x_dot=0.5, theta=0.02, theta_dot=-0.3)
        nxt = cartpole_dynamics(state, 0)
        assert nxt.x == pytest.approx(0.1 + 0.02 * 0.5)
        assert nxt.theta == pytest.approx(0.02 - 0.02 * 0.3)

    def test_invalid_action(self):
        with pytest.raises(ConfigurationError):
            cartpole_dynamics(CartPoleState(x=0.0, x_dot=0.0, theta=0.0, theta_dot=0.0), 2)

    def test_failure_thresholds(self):
        assert CartPoleState(x=X_THRESHOLD + 1e-6, x_dot=0.0, theta=0.0, theta_dot=0.0).failed
        assert CartPoleState(x=0.0, x_dot=0.0, theta=-THETA_THRESHOLD - 1e-6, theta_dot=0.0).failed
        edge = CartPoleState(x=X_THRESHOLD, x_dot=0.0, theta=THETA_THRESHOLD, theta_dot=0.0)
        assert not edge.failed


class TestShiftedCartPole:
    def test_reset_bounds(self, rng):
        env = make_env(rng)
        for _ in range(20):
            obs = env.reset(rng)
            assert np.all(np.abs(obs) <= 0.05)
            assert not env.done

    def test_observation_adds_offsets(self, rng):
        env = make_env(rng)
        env.reset(rng)
        env.schedule.current_offsets = np.array([1.0, -2.0, 0.5, 0.0])
        assert np.allclose(env.observe(), env.state.as_array() + [1.0, -2.0, 0.5, 0.0])

    def test_episode_fails_eventually(self, rng):
        env = make_env(rng)
        env.reset(rng)
        done, steps = False, 0
        while not done:
            _, _, reward, done = env.step(1)
            assert reward == 1.0
            steps += 1
        assert env.state.failed and not env.truncated
        assert env.episode_return == steps

    def test_episode_cap_truncates(self, rng):
        env = make_env(rng, episode_cap=3)
        env.reset(rng)
        for action in (0, 1, 0):
            _, _, _, done = env.step(action)
        assert done and env.truncated
        assert env.state.step_in_episode == 3

    def test_step_after_done(self, rng):
        env = make_env(rng, episode_cap=1)
        env.reset(rng)
        env.step(0)
        with pytest.raises(ProtocolError):
            env.step(0)

    def test_observe_before_reset(self, rng):
        with pytest.raises(ProtocolError):
            make_env(rng).observe()

    def test_deterministic_under_seed(self):
        def trajectory(seed):
            rng = np.random.default_rng(seed)
            env = make_env(rng)
            observations = [env.reset(rng)]
            for action in (1, 0, 1, 1, 0):
                observations.append(env.step(action)[1])
            return np.array(observations)

        assert np.array_equal(trajectory(11), trajectory(11))
