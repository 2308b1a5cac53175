import numpy as np
import pytest

from app.core.exceptions import ConfigurationError
from app.optim.adam import Adam
from app.optim.trac import Trac
from app.optim.wrappers import privileged_reset_wrap, warmstart_wrap


@pytest.fixture
def grads(rng):
    return rng.normal(size=(60, 3))


def run(optimizer, params, grads):
    trajectory = []
    for g in grads:
        params = optimizer.step(params, g)
        trajectory.append(params.copy())
    return trajectory


class TestWarmstart:
    def test_zero_warm_steps_is_plain_trac(self, grads):
        start = np.array([0.1, -0.2, 0.3])
        warm = run(warmstart_wrap(Adam(3), 0), start, grads)
        plain = run(Trac(start, Adam(3)), start, grads)
        assert np.array_equal(np.array(warm), np.array(plain))

    def test_reference_is_the_base_iterate(self, grads):
        start = np.zeros(3)
        wrapper = warmstart_wrap(Adam(3), 30)
        run(wrapper, start, grads[:30])
        base_only = run(Adam(3), start, grads[:30])
        assert wrapper.engaged
        assert np.array_equal(wrapper.theta_ref, base_only[-1])

    def test_engages_with_trac_after_warmup(self, grads):
        start = np.zeros(3)
        wrapper = warmstart_wrap(Adam(3), 30)
        assert wrapper.scaling is None
        run(wrapper, start, grads)
        assert wrapper.scaling is not None
        assert len(wrapper.tuner_outputs) == 6
        assert wrapper.trac.state.t == len(grads) - 30

    def test_long_warmup_is_plain_base(self, grads):
        start = np.zeros(3)
        warm = run(warmstart_wrap(Adam(3), 100), start, grads)
        plain = run(Adam(3), start, grads)
        assert np.array_equal(np.array(warm), np.array(plain))
        assert warmstart_wrap(Adam(3), 100).scaling is None

    def test_reset_disengages(self, grads):
        wrapper = warmstart_wrap(Adam(3), 5)
        run(wrapper, np.zeros(3), grads[:10])
        wrapper.reset(np.zeros(3))
        assert not wrapper.engaged and wrapper.steps_taken == 0

    def test_negative_warm_steps(self):
        with pytest.raises(ConfigurationError):
            warmstart_wrap(Adam(1), -1)


class TestPrivilegedReset:
    def test_without_boundaries_matches_inner(self, grads):
        start = np.ones(3)
        wrapped = run(privileged_reset_wrap(Adam(3), lambda: np.zeros(3)), start, grads)
        plain = run(Adam(3), start, grads)
        assert np.array_equal(np.array(wrapped), np.array(plain))

    def test_boundary_draws_from_reinit_stream(self, grads):
        stream = np.random.default_rng(7)
        expected = np.random.default_rng(7).normal(size=3)
        wrapper = privileged_reset_wrap(Adam(3), lambda: stream.normal(size=3))
        params = run(wrapper, np.ones(3), grads[:20])[-1]
        params = wrapper.on_task_boundary(params)
        assert np.array_equal(params, expected)
        assert wrapper.resets == 1
        assert wrapper.inner.state.t == 0
        assert not wrapper.inner.state.m.any()

    def test_continues_like_fresh_inner_after_boundary(self, grads):
        fresh = np.array([0.5, 0.5, 0.5])
        wrapper = privileged_reset_wrap(Adam(3), lambda: fresh.copy())
        run(wrapper, np.ones(3), grads[:10])
        params = wrapper.on_task_boundary(np.ones(3))
        after = run(wrapper, params, grads[10:20])
        reference = run(Adam(3), fresh.copy(), grads[10:20])
        assert np.array_equal(np.array(after), np.array(reference))

    def test_reports_inner_scaling(self):
        assert privileged_reset_wrap(Adam(1), lambda: np.zeros(1)).scaling is None
        trac = Trac(np.zeros(1), Adam(1))
        assert privileged_reset_wrap(trac, lambda: np.zeros(1)).scaling == 1e-8
