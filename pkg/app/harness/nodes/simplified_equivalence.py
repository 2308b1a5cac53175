"""
Simplified Equivalence Node

Drives the simplified TRAC recursion with random gradients and checks every
iterate against its closed form

    theta_{t+1} - theta_ref = (beta - alpha * h_t / S_t)(theta_t - theta_ref) - eta * S_{t+1} * g_t.

Alongside it runs L2-init gradient descent with lambda = (1 - beta) / eta on
the same stream, scaled by S_{t+1} so both share the effective learning rate
eta * S_{t+1}. The rows record the discount that L2 run realizes and how far
its iterate drifts from the simplified one; the gap stays small while
alpha * h_t is small against S_t.
"""

import numpy as np

from app.core.exceptions import DegenerateStateError
from app.core.node import Node
from app.core.schema.record import EquivalenceRow, RunRecord, RunStatus
from app.core.schema.task import RunContext
from app.core.seeding import EQUIVALENCE_STREAM, derive_rng
from app.harness.config import SimplifiedOptions
from app.harness.storage import write_run
from app.logging.factory import logger
from app.optim.l2_init import L2InitState, l2_init_step
from app.optim.simplified import (
    effective_discount,
    measured_discount,
    recursion_offset,
    simplified_trac_init,
    simplified_trac_step,
)

# Offsets smaller than this are compared in absolute terms
RESIDUAL_FLOOR = 1e-12


def _relative_gap(actual: np.ndarray, other: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(actual)), RESIDUAL_FLOOR)
    return float(np.linalg.norm(actual - other)) / scale


def equivalence_run(
    options: SimplifiedOptions, seed: int, experiment: str = "simplified_equivalence"
) -> RunRecord:
    """One seeded trajectory of the simplified recursion and its paired L2-init run."""
    rng = derive_rng(seed, EQUIVALENCE_STREAM)
    theta_ref = rng.normal(size=options.dim)
    l2_lambda = (1.0 - options.beta) / options.eta
    l2_state = L2InitState(lr=options.eta, lam=l2_lambda, theta_ref=theta_ref)
    l2_theta = theta_ref.copy()

    cfg = simplified_trac_init(
        theta_ref, options.eta, options.beta, options.alpha, S=options.initial_S
    )
    record = RunRecord(experiment=experiment, seed=seed)
    for step in range(1, options.steps + 1):
        g = rng.uniform(-options.grad_scale, options.grad_scale, size=options.dim)
        offset = cfg.theta - theta_ref
        S = cfg.S
        try:
            cfg, theta = simplified_trac_step(cfg, g)
        except DegenerateStateError as e:
            record.extra["stopped_at"] = step
            logger.warning("Seed %d stopped at step %d: %s", seed, step, e)
            break

        l2_offset = l2_theta - theta_ref
        l2_theta = l2_init_step(l2_state, l2_theta, cfg.S * g)
        l2_next = l2_theta - theta_ref

        actual = theta - theta_ref
        predicted = recursion_offset(
            offset, g, options.eta, options.beta, options.alpha, S, cfg.S, cfg.last_h
        )
        record.equivalence.append(
            EquivalenceRow(
                step=step,
                S=cfg.S,
                h=cfg.last_h,
                effective_discount=effective_discount(options.beta, options.alpha, S, cfg.last_h),
                l2_discount=measured_discount(l2_offset, l2_next, options.eta * cfg.S * g),
                l2_gap=_relative_gap(actual, l2_next),
                residual=_relative_gap(actual, predicted),
            )
        )

    record.status = RunStatus.COMPLETED
    record.extra.update(
        {
            "l2_lambda": l2_lambda,
            "final_S": cfg.S,
            "max_residual": max((row.residual for row in record.equivalence), default=0.0),
            "max_l2_gap": max((row.l2_gap for row in record.equivalence), default=0.0),
        }
    )
    return record


class SimplifiedEquivalence(Node):
    """One equivalence trajectory per configured seed."""

    def process(self, run_context: RunContext) -> RunContext:
        config = run_context.config
        worst = 0.0
        for seed in config.seeds:
            record = equivalence_run(config.simplified, seed, experiment=config.experiment.value)
            write_run(run_context.output_root, record)
            run_context.records.append(record)
            worst = max(worst, record.extra["max_residual"])

        logger.info("Largest relative residual across %d seeds: %.3g", len(config.seeds), worst)
        run_context.update_node(self.node_name, max_residual=worst)
        return run_context
