import math

import numpy as np
import pytest

from app.core.exceptions import ConfigurationError, DimensionMismatchError, InvalidInputError
from app.optim.adam import Adam
from app.optim.sgd import SGD
from app.optim.trac import DEFAULT_BETAS, HMode, Trac, trac_init, trac_step
from app.optim.tuner import tuner_init, tuner_step


def composed_trajectory(grads, lr, betas, eps=1e-8, h_mode=HMode.META_OFFSET):
    """TRAC written out from tuner_step and plain gradient descent."""
    theta_ref = 0.0
    theta = theta_base = theta_ref
    tuners = [tuner_init(beta, eps) for beta in betas]
    out = []
    for g in grads:
        offset = theta - theta_ref if h_mode is HMode.META_OFFSET else theta_base - theta_ref
        h = g * offset
        theta_base = theta_base - lr * g
        S = eps + math.fsum(tuner_step(tuner, h)[1] for tuner in tuners)
        theta = theta_ref + (theta_base - theta_ref) * S
        out.append((theta, S))
    return out


class TestTracInit:
    def test_default_grid(self):
        state = trac_init(np.array([1.0, 2.0]), SGD(0.1))
        assert len(state.tuners) == 6
        assert [t.beta for t in state.tuners] == list(DEFAULT_BETAS)
        assert state.S == 1e-8
        assert np.array_equal(state.theta, [1.0, 2.0])
        assert np.array_equal(state.theta_base, [1.0, 2.0])

    def test_single_undiscounted_tuner(self):
        assert len(trac_init(np.zeros(1), SGD(0.1), betas=[1.0]).tuners) == 1

    def test_empty_grid(self):
        with pytest.raises(ConfigurationError):
            trac_init(np.zeros(1), SGD(0.1), betas=[])

    def test_invalid_beta(self):
        with pytest.raises(ConfigurationError):
            trac_init(np.zeros(1), SGD(0.1), betas=[0.9, 1.2])

    def test_overflowing_clamp_bound(self):
        with pytest.raises(ConfigurationError):
            Trac(np.zeros(1), SGD(0.1), clamp_bound=30.0)

    def test_reference_is_copied(self):
        theta_ref = np.zeros(2)
        state = trac_init(theta_ref, SGD(0.1))
        theta_ref[0] = 5.0
        assert state.theta_ref[0] == 0.0


class TestTracStep:
    def test_zero_gradients_stay_at_reference(self):
        theta_ref = np.array([0.3, -0.7])
        state = trac_init(theta_ref, SGD(0.1))
        for _ in range(10):
            state, theta = trac_step(state, np.zeros(2))
            assert np.array_equal(theta, theta_ref)
            assert state.S == state.s_floor
            assert state.last_outputs == [0.0] * 6

    def test_matches_composition(self):
        state = trac_init(np.zeros(1), SGD(0.1))
        expected = composed_trajectory([1.0] * 5, 0.1, DEFAULT_BETAS)
        for theta_expected, S_expected in expected:
            state, theta = trac_step(state, np.array([1.0]))
            assert theta[0] == pytest.approx(theta_expected, rel=1e-12, abs=1e-30)
            assert state.S == pytest.approx(S_expected, rel=1e-12)

    def test_base_offset_mode_matches_composition(self, rng):
        grads = rng.normal(size=20).tolist()
        state = trac_init(np.zeros(1), SGD(0.1), h_mode=HMode.BASE_OFFSET)
        expected = composed_trajectory(grads, 0.1, DEFAULT_BETAS, h_mode=HMode.BASE_OFFSET)
        for g, (theta_expected, S_expected) in zip(grads, expected):
            state, theta = trac_step(state, np.array([g]))
            assert theta[0] == pytest.approx(theta_expected, rel=1e-12, abs=1e-30)
            assert state.S == pytest.approx(S_expected, rel=1e-12)

    def test_first_step_uses_floor(self):
        state, theta = trac_step(trac_init(np.zeros(1), SGD(0.1)), np.array([1.0]))
        assert state.S == 1e-8
        assert theta[0] == pytest.approx(-0.1 * 1e-8)

    @pytest.mark.parametrize("make_base", [lambda: SGD(0.1), lambda: Adam(4)], ids=["sgd", "adam"])
    def test_played_point_decomposes_exactly(self, rng, make_base):
        theta_ref = rng.normal(size=4)
        state = trac_init(theta_ref, make_base())
        for g in rng.normal(size=(50, 4)):
            state, theta = trac_step(state, g)
            assert np.array_equal(theta, theta_ref + (state.theta_base - theta_ref) * state.S)

    @pytest.mark.parametrize("make_base", [lambda: SGD(0.1), lambda: Adam(3)], ids=["sgd", "adam"])
    def test_zero_gradient_coordinate_stays_put(self, rng, make_base):
        theta_ref = rng.normal(size=3)
        state = trac_init(theta_ref, make_base())
        for g in rng.normal(size=(40, 3)):
            g[1] = 0.0
            state, theta = trac_step(state, g)
            assert state.theta_base[1] == theta_ref[1]
            assert theta[1] == theta_ref[1] + state.S * (state.theta_base[1] - theta_ref[1])
            assert theta[1] == theta_ref[1]
        assert not np.array_equal(state.theta_base[[0, 2]], theta_ref[[0, 2]])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            trac_step(trac_init(np.zeros(2), SGD(0.1)), np.zeros(3))

    def test_non_finite_gradient(self):
        with pytest.raises(InvalidInputError):
            trac_step(trac_init(np.zeros(2), SGD(0.1)), np.array([0.0, math.inf]))

    def test_clamp_nonnegative_outputs(self, rng):
        state = trac_init(np.zeros(3), SGD(0.1), clamp_nonnegative=True)
        for g in rng.normal(size=(30, 3)):
            state, _ = trac_step(state, g)
            assert min(state.last_outputs) >= 0.0
            assert state.S >= state.s_floor


class TestTracOptimizer:
    def test_exposes_scaling_and_outputs(self, rng):
        trac = Trac(np.zeros(2), Adam(2))
        params = np.zeros(2)
        assert trac.scaling == 1e-8
        params = trac.step(params, rng.normal(size=2))
        assert len(trac.tuner_outputs) == 6
        assert trac.scaling == pytest.approx(1e-8 + sum(trac.tuner_outputs))
        assert trac.name == "Trac(Adam)"

    def test_reset_reanchors(self, rng):
        trac = Trac(np.zeros(2), Adam(2))
        params = trac.step(np.zeros(2), rng.normal(size=2))
        trac.reset(np.ones(2))
        assert np.array_equal(trac.theta_ref, np.ones(2))
        assert trac.state.t == 0
        assert trac.scaling == 1e-8

    def test_rejects_foreign_params_shape(self):
        with pytest.raises(DimensionMismatchError):
            Trac(np.zeros(2), SGD(0.1)).step(np.zeros(3), np.zeros(3))
