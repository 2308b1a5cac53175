"""
OCO Bench Module

Plays an Optimizer against a quadratic loss stream and keeps exact regret
accounting. Rounds are 1-indexed: round t plays x_t, observes
g_t = x_t - c_t and lets the algorithm produce x_{t+1}.
"""

import math

import numpy as np

from app.core.exceptions import ConfigurationError, ErrorMessages, ProtocolError
from app.core.schema.record import OcoRow
from app.core.types import ParamVector, as_param_vector, check_same_dims
from app.logging.factory import logger
from app.oco.config import OcoOptions
from app.oco.schema import QuadraticLossSeq, RegretRecord, alternating_sequence, stationary_sequence
from app.optim.base import Optimizer
from app.optim.sgd import SGD
from app.optim.trac import Trac


def loss_and_grad(seq: QuadraticLossSeq, t: int, x: ParamVector) -> tuple[float, ParamVector]:
    """Loss 0.5 * ||x - c_t||^2 and its gradient x - c_t at round t (1-based).

    Raises:
        ProtocolError: If t is outside 1..T
        DimensionMismatchError: If x is not dimensioned like the centers
    """
    if not 1 <= t <= seq.total_steps:
        raise ProtocolError(f"Round {t} outside 1..{seq.total_steps}")
    center = seq.centers[t - 1]
    check_same_dims(center, x, "x")
    diff = x - center
    return 0.5 * float(np.dot(diff, diff)), diff


def best_fixed_comparator(seq: QuadraticLossSeq) -> ParamVector:
    """argmin_u sum_t l_t(u), the mean of the centers."""
    return seq.centers.mean(axis=0)


def cumulative_comparator_loss(seq: QuadraticLossSeq, u: ParamVector) -> float:
    diff = seq.centers - u[None, :]
    return 0.5 * math.fsum(np.einsum("ij,ij->i", diff, diff))


def static_regret(iterates: list[ParamVector], seq: QuadraticLossSeq, u: ParamVector) -> float:
    """sum_t l_t(x_t) - sum_t l_t(u).

    Raises:
        ProtocolError: If the number of iterates differs from T
    """
    if len(iterates) != seq.total_steps:
        raise ProtocolError(f"Expected {seq.total_steps} iterates, got {len(iterates)}")
    played = math.fsum(loss_and_grad(seq, t, x)[0] for t, x in enumerate(iterates, start=1))
    return played - cumulative_comparator_loss(seq, u)


def run_oco(
    algorithm: Optimizer,
    seq: QuadraticLossSeq,
    x1: ParamVector,
    u: ParamVector | None = None,
) -> RegretRecord:
    """Run the protocol for T rounds and record regret against u.

    Args:
        algorithm: Any optimizer; TRAC must be constructed with theta_ref = x1
        seq: Loss stream
        x1: First played point
        u: Comparator; defaults to the best fixed comparator

    Returns:
        RegretRecord with per-round rows (step, loss, regret_to_date, S)
    """
    x = as_param_vector(x1, "x1").copy()
    comparator = best_fixed_comparator(seq) if u is None else as_param_vector(u, "u")

    record = RegretRecord(algorithm=algorithm.name, comparator=comparator)
    played_total = 0.0
    comparator_total = 0.0
    for t in range(1, seq.total_steps + 1):
        loss, grad = loss_and_grad(seq, t, x)
        comparator_loss, _ = loss_and_grad(seq, t, comparator)
        played_total += loss
        comparator_total += comparator_loss

        record.iterates.append(x.copy())
        record.losses.append(loss)
        x = algorithm.step(x, grad)
        record.rows.append(
            OcoRow(
                step=t,
                loss=loss,
                regret_to_date=played_total - comparator_total,
                S=algorithm.scaling,
            )
        )

    record.cumulative_loss = math.fsum(record.losses)
    record.regret = record.cumulative_loss - cumulative_comparator_loss(seq, comparator)
    logger.debug(
        "OCO %s finished: T=%d regret=%.6g", algorithm.name, seq.total_steps, record.regret
    )
    return record


class StayAtReference(Optimizer):
    """Plays the reference point every round."""

    @property
    def name(self) -> str:
        return "StayAtReference"

    def step(self, params: ParamVector, grad: ParamVector) -> ParamVector:
        return params

    def reset(self, params: ParamVector) -> None:
        pass


def mistuned_gd(good_lr: float, factor: float = 10.0) -> SGD:
    """Gradient descent with a learning rate `factor` times too large."""
    if factor <= 0:
        raise ConfigurationError(ErrorMessages.invalid_config("mistune_factor", f"{factor} <= 0"))
    return SGD(good_lr * factor)


def oco_bench(options: OcoOptions) -> dict[str, RegretRecord]:
    """Run every bench comparison.

    Keys are `<stream>/<algorithm>`: the stationary stream at T and 2T for
    TRAC(GD), and the alternating stream (best comparator at the origin) for
    TRAC over the mis-tuned GD, the mis-tuned GD alone and the stay-at-reference
    player.
    """
    center = np.asarray(options.center, dtype=np.float64)
    origin = np.zeros_like(center)
    records: dict[str, RegretRecord] = {}

    for horizon in (options.horizon, 2 * options.horizon):
        seq = stationary_sequence(center, horizon)
        trac = Trac(origin, SGD(options.stationary_lr))
        records[f"stationary_T{horizon}/trac_gd"] = run_oco(trac, seq, origin)

    seq = alternating_sequence(center, options.task_length, options.num_tasks)
    players: dict[str, Optimizer] = {
        "trac_gd": Trac(origin, mistuned_gd(options.good_lr, options.mistune_factor)),
        "mistuned_gd": mistuned_gd(options.good_lr, options.mistune_factor),
        "stay_at_ref": StayAtReference(),
    }
    for key, player in players.items():
        records[f"piecewise/{key}"] = run_oco(player, seq, origin)

    for key, record in records.items():
        logger.info(
            "%s: cumulative loss %.6g, regret %.6g", key, record.cumulative_loss, record.regret
        )
    return records
