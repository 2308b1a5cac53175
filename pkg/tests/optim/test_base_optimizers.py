import math

import numpy as np
import pytest

from app.core.exceptions import ConfigurationError, DimensionMismatchError, InvalidInputError
from app.optim.adam import Adam, adam_init, adam_step
from app.optim.l2_init import L2Init, L2InitState, l2_init_step
from app.optim.sgd import SGD, sgd_step


class TestSgd:
    def test_zero_gradient_is_fixed_point(self):
        assert np.array_equal(sgd_step(np.array([1.0, 2.0]), np.zeros(2), 0.1), [1.0, 2.0])

    def test_arithmetic(self):
        assert np.allclose(sgd_step(np.array([1.0, 0.0]), np.array([1.0, -1.0]), 0.5), [0.5, 0.5])

    def test_random_case(self, rng):
        params, grad = rng.normal(size=10), rng.normal(size=10)
        assert np.array_equal(sgd_step(params, grad, 0.03), params - 0.03 * grad)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            sgd_step(np.zeros(2), np.zeros(3), 0.1)

    def test_non_finite_gradient(self):
        with pytest.raises(InvalidInputError):
            sgd_step(np.zeros(2), np.array([0.0, math.nan]), 0.1)

    def test_negative_lr_rejected(self):
        with pytest.raises(ConfigurationError):
            SGD(-0.1)


class TestAdam:
    def test_first_step_moves_by_lr(self):
        state = adam_init(1, lr=0.001)
        state, updated = adam_step(state, np.array([0.0]), np.array([1.0]))
        assert updated[0] == pytest.approx(-0.001, rel=1e-7)
        assert state.t == 1

    def test_zero_gradient_stream_is_fixed_point(self):
        state = adam_init(3)
        params = np.array([0.5, -1.0, 2.0])
        for _ in range(5):
            state, params = adam_step(state, params, np.zeros(3))
        assert np.array_equal(params, [0.5, -1.0, 2.0])

    def test_two_step_recursion(self):
        lr, b1, b2, eps = 0.01, 0.9, 0.999, 1e-8
        state = adam_init(1, lr=lr, beta1=b1, beta2=b2, eps=eps)
        params = np.array([1.0])
        expected = 1.0
        m = v = 0.0
        for t, g in enumerate((1.0, -1.0), start=1):
            state, params = adam_step(state, params, np.array([g]))
            m = b1 * m + (1 - b1) * g
            v = b2 * v + (1 - b2) * g * g
            expected -= lr * (m / (1 - b1**t)) / (math.sqrt(v / (1 - b2**t)) + eps)
            assert params[0] == pytest.approx(expected, rel=1e-14)
        assert np.all(state.v >= 0)

    def test_decoupled_weight_decay(self):
        state = adam_init(2, lr=0.1, weight_decay=0.5)
        _, updated = adam_step(state, np.array([1.0, -2.0]), np.zeros(2))
        assert np.allclose(updated, [1.0 * (1 - 0.05), -2.0 * (1 - 0.05)])

    def test_weight_decay_does_not_enter_moments(self):
        state = adam_init(1, lr=0.1, weight_decay=0.5)
        state, _ = adam_step(state, np.array([3.0]), np.array([0.0]))
        assert state.m[0] == 0.0 and state.v[0] == 0.0

    def test_reset_clears_moments(self):
        adam = Adam(2)
        adam.step(np.zeros(2), np.ones(2))
        adam.reset(np.zeros(2))
        assert adam.state.t == 0
        assert not adam.state.m.any() and not adam.state.v.any()

    def test_names(self):
        assert Adam(1).name == "Adam"
        assert Adam(1, weight_decay=0.1).name == "AdamW"

    def test_invalid_hyperparameters(self):
        with pytest.raises(ConfigurationError):
            adam_init(1, weight_decay=-1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            adam_step(adam_init(2), np.zeros(3), np.zeros(3))


class TestL2Init:
    def test_pure_contraction(self):
        state = L2InitState(lr=0.1, lam=1.0, theta_ref=np.array([0.0]))
        assert l2_init_step(state, np.array([1.0]), np.array([0.0]))[0] == pytest.approx(0.9)

    def test_lambda_alias(self):
        state = L2InitState.model_validate({"lr": 0.1, "lambda": 2.0, "theta_ref": np.zeros(1)})
        assert state.lam == 2.0

    def test_both_algebraic_forms_agree(self, rng):
        theta_ref, theta, g = rng.normal(size=(3, 8))
        eta, lam = 0.05, 3.0
        state = L2InitState(lr=eta, lam=lam, theta_ref=theta_ref)
        direct = l2_init_step(state, theta, g)
        discounted = theta_ref + (1 - lam * eta) * (theta - theta_ref) - eta * g
        assert np.allclose(direct, discounted, rtol=0.0, atol=1e-14)

    def test_zero_lambda_is_gradient_descent(self, rng):
        theta, g = rng.normal(size=(2, 4))
        state = L2InitState(lr=0.1, lam=0.0, theta_ref=np.zeros(4))
        assert np.array_equal(l2_init_step(state, theta, g), sgd_step(theta, g, 0.1))

    def test_wrapper_over_sgd_matches_step(self, rng):
        theta_ref = rng.normal(size=5)
        optimizer = L2Init(SGD(0.1), 2.0, theta_ref)
        state = L2InitState(lr=0.1, lam=2.0, theta_ref=theta_ref)
        theta = theta_ref.copy()
        expected = theta_ref.copy()
        for g in rng.normal(size=(10, 5)):
            theta = optimizer.step(theta, g)
            expected = l2_init_step(state, expected, g)
        assert np.allclose(theta, expected, rtol=0.0, atol=1e-14)

    def test_negative_lambda_rejected(self):
        with pytest.raises(ConfigurationError):
            L2Init(SGD(0.1), -1.0, np.zeros(1))

    def test_reference_mismatch(self):
        state = L2InitState(lr=0.1, lam=1.0, theta_ref=np.zeros(2))
        with pytest.raises(DimensionMismatchError):
            l2_init_step(state, np.zeros(3), np.zeros(3))
