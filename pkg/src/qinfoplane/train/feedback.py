"""Feedback strength schedules and the compression-gnostic gradient update."""
import enum
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError


class AlphaMode(enum.Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"


class FeedbackMode(enum.Enum):
    LOSS_REGULARIZER = "loss_regularizer"
    SCHEDULER = "scheduler"


@dataclass(frozen=True)
class AlphaSchedule:
    mode: AlphaMode = AlphaMode.STATIC
    alpha_max: float = 0.0
    s_max: int = 30

    def __post_init__(self):
        object.__setattr__(self, "mode", AlphaMode(self.mode))
        if self.alpha_max < 0:
            raise InvalidArgumentError("alpha_max must be nonnegative")
        if self.s_max < 1:
            raise InvalidArgumentError("s_max must be at least 1")


def alpha_value(schedule, s):
    """Feedback strength at 0-based epoch ``s``.

    The dynamic schedule grows as (alpha_max + 1) ** (s / s_max) - 1, from 0 at
    s = 0 up to alpha_max at s = s_max, and stays there afterwards.
    """
    if s < 0:
        raise InvalidArgumentError("epoch index must be nonnegative")
    if schedule.mode is AlphaMode.STATIC or s >= schedule.s_max:
        return float(schedule.alpha_max)
    return (schedule.alpha_max + 1.0) ** (s / schedule.s_max) - 1.0


def feedback_step(grad_err, l_err, alpha, l_comp, mode=FeedbackMode.SCHEDULER, grad_comp=None):
    """Effective gradient under compression feedback.

    SCHEDULER rescales the error gradient by 1 + alpha * l_comp. LOSS_REGULARIZER
    applies the full product rule of l_err * (1 + alpha * l_comp); with a binned
    estimate the compression term is piecewise constant in the parameters, so
    ``grad_comp`` defaults to zero and both modes give the same update.
    """
    if alpha < 0:
        raise InvalidArgumentError("alpha must be nonnegative")
    grad_err = np.asarray(grad_err, dtype=np.float64)
    scaled = grad_err * (1.0 + alpha * l_comp)
    if FeedbackMode(mode) is FeedbackMode.SCHEDULER:
        return scaled
    if grad_comp is None:
        grad_comp = np.zeros_like(grad_err)
    return scaled + alpha * l_err * grad_comp
