import numpy as np
import pytest

from app.core.exceptions import DegenerateStateError
from app.optim.l2_init import L2InitState, l2_init_step
from app.optim.simplified import (
    effective_discount,
    measured_discount,
    recursion_offset,
    simplified_trac_init,
    simplified_trac_step,
)


def test_zero_scale_is_degenerate():
    cfg = simplified_trac_init(np.zeros(1), 0.1, 0.99, 0.01, S=0.0)
    with pytest.raises(DegenerateStateError):
        simplified_trac_step(cfg, np.array([1.0]))


def test_constant_scale_multiplies_base_offset(rng):
    theta_ref = rng.normal(size=3)
    cfg = simplified_trac_init(theta_ref, 0.1, 1.0, 0.0, S=2.0)
    for g in rng.normal(size=(10, 3)):
        cfg, theta = simplified_trac_step(cfg, g)
        assert cfg.S == 2.0
        assert np.allclose(theta - theta_ref, 2.0 * (cfg.theta_base - theta_ref))


def test_recursion_holds_every_step(rng):
    eta, beta, alpha = 0.1, 0.99, 0.01
    theta_ref = rng.normal(size=1)
    cfg = simplified_trac_init(theta_ref, eta, beta, alpha, S=1.0)
    for g in rng.uniform(-1.0, 1.0, size=(200, 1)):
        offset, S = cfg.theta - theta_ref, cfg.S
        cfg, theta = simplified_trac_step(cfg, g)
        predicted = recursion_offset(offset, g, eta, beta, alpha, S, cfg.S, cfg.last_h)
        scale = max(np.abs(theta - theta_ref).max(), 1.0)
        assert np.abs((theta - theta_ref) - predicted).max() <= 1e-12 * scale


def test_scale_update_rule():
    cfg = simplified_trac_init(np.zeros(1), 0.1, 0.9, 0.5, S=1.0)
    cfg, _ = simplified_trac_step(cfg, np.array([1.0]))
    assert cfg.last_h == 0.0
    assert cfg.S == pytest.approx(0.9)
    h_expected = float(cfg.theta[0] * 2.0)
    cfg, _ = simplified_trac_step(cfg, np.array([2.0]))
    assert cfg.last_h == pytest.approx(h_expected)
    assert cfg.S == pytest.approx(0.9 * 0.9 - 0.5 * h_expected)


def test_effective_discount():
    assert effective_discount(0.99, 0.01, 2.0, 4.0) == pytest.approx(0.97)
    assert effective_discount(0.99, 0.0, 1.0, 123.0) == 0.99
    with pytest.raises(DegenerateStateError):
        effective_discount(0.99, 0.01, 0.0, 1.0)


def run_pair(eta, beta, alpha, gradients, theta_ref):
    """Simplified TRAC and L2-init GD (lambda = (1 - beta) / eta) on one gradient stream.

    The L2 run sees S_{t+1} * g_t so both use the effective learning rate eta * S_{t+1}.
    """
    cfg = simplified_trac_init(theta_ref, eta, beta, alpha, S=1.0)
    state = L2InitState(lr=eta, lam=(1.0 - beta) / eta, theta_ref=theta_ref)
    l2_theta = theta_ref.copy()
    rows = []
    for g in gradients:
        S, l2_offset = cfg.S, l2_theta - theta_ref
        cfg, theta = simplified_trac_step(cfg, g)
        l2_theta = l2_init_step(state, l2_theta, cfg.S * g)
        rows.append((S, cfg.last_h, theta - theta_ref, l2_offset, l2_theta - theta_ref, cfg.S * g))
    return rows


def test_l2_init_run_realizes_discount_beta(rng):
    eta, beta = 0.1, 0.95
    theta_ref = rng.normal(size=4)
    rows = run_pair(eta, beta, 0.0, rng.uniform(-1.0, 1.0, size=(200, 4)), theta_ref)
    for _, _, _, l2_offset, l2_next, step in rows[1:]:
        assert measured_discount(l2_offset, l2_next, eta * step) == pytest.approx(beta, rel=1e-9)


def test_zero_alpha_simplified_trac_tracks_l2_init_iterates(rng):
    theta_ref = rng.normal(size=4)
    rows = run_pair(0.1, 0.95, 0.0, rng.uniform(-1.0, 1.0, size=(300, 4)), theta_ref)
    for _, _, trac_offset, _, l2_offset, _ in rows:
        assert np.allclose(trac_offset, l2_offset, rtol=1e-9, atol=1e-12)


def test_small_alpha_discount_gap_is_alpha_h_over_S(rng):
    eta, beta, alpha = 0.1, 0.95, 1e-4
    theta_ref = rng.normal(size=4)
    rows = run_pair(eta, beta, alpha, rng.uniform(-1.0, 1.0, size=(200, 4)), theta_ref)
    gaps = []
    for S, h, _, l2_offset, l2_next, step in rows[1:]:
        l2_discount = measured_discount(l2_offset, l2_next, eta * step)
        gap = l2_discount - effective_discount(beta, alpha, S, h)
        assert gap == pytest.approx(alpha * h / S, abs=1e-9)
        gaps.append(abs(gap))
    assert max(gaps) < 1e-2
    assert max(gaps) > 0.0


def test_measured_discount_undefined_at_zero_offset():
    assert measured_discount(np.zeros(2), np.ones(2), np.ones(2)) is None
