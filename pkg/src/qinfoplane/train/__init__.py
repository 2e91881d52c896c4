"""Losses, compression feedback, optimizers, metrics and the training loop."""
from .feedback import AlphaMode, AlphaSchedule, FeedbackMode, alpha_value, feedback_step
from .fit import (
    READOUT,
    EpochRecord,
    FitResult,
    Optimizer,
    Splits,
    TrainConfig,
    fit,
    grad_pqc,
)
from .losses import (
    bce_loss,
    combined_loss,
    comp_loss_classification,
    comp_loss_regression,
    mse_loss,
)
from .metrics import Task, accuracy, metrics, r2_score, roc_auc, steps_to_converge
from .optim import AdamState, adam_step, sgd_step

__all__ = [
    "READOUT",
    "AdamState",
    "AlphaMode",
    "AlphaSchedule",
    "EpochRecord",
    "FeedbackMode",
    "FitResult",
    "Optimizer",
    "Splits",
    "Task",
    "TrainConfig",
    "accuracy",
    "adam_step",
    "alpha_value",
    "bce_loss",
    "combined_loss",
    "comp_loss_classification",
    "comp_loss_regression",
    "feedback_step",
    "fit",
    "grad_pqc",
    "metrics",
    "mse_loss",
    "r2_score",
    "roc_auc",
    "sgd_step",
    "steps_to_converge",
]
