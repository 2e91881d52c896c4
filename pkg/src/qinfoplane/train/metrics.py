import enum

import numpy as np

from ..errors import InvalidArgumentError


class Task(enum.Enum):
    CLASSIFICATION = "classification"
    REGRESSION = "regression"


def _pair(y_true, scores):
    y = np.asarray(y_true, dtype=np.float64).reshape(-1)
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    if y.shape != s.shape:
        raise InvalidArgumentError("labels and scores differ in length")
    if y.size == 0:
        raise InvalidArgumentError("empty input")
    return y, s


def accuracy(y_true, scores, threshold=0.0):
    """Fraction of points where (score >= threshold) matches (label > 0).

    Works for +-1 labels with threshold 0 (sign read-out, sign(0) = +1) and
    for {0, 1} labels with probability scores and threshold 0.5.
    """
    y, s = _pair(y_true, scores)
    return float(np.mean((s >= threshold) == (y > 0)))


def roc_auc(y_true, scores):
    """Trapezoid area under the ROC curve; tied scores move TPR and FPR together."""
    y, s = _pair(y_true, scores)
    pos = y > 0
    n_pos = int(pos.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise InvalidArgumentError("AUC needs both classes present")
    order = np.argsort(-s, kind="mergesort")
    s_sorted = s[order]
    p_sorted = pos[order]
    # one ROC point per distinct threshold
    last_of_group = np.r_[np.diff(s_sorted) != 0, True]
    tps = np.cumsum(p_sorted)[last_of_group]
    fps = np.cumsum(~p_sorted)[last_of_group]
    tpr = np.r_[0.0, tps / n_pos]
    fpr = np.r_[0.0, fps / n_neg]
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) * 0.5))


def r2_score(y_true, y_pred):
    y, p = _pair(y_true, y_pred)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise InvalidArgumentError("R^2 is undefined for constant targets")
    return 1.0 - float(np.sum((y - p) ** 2)) / ss_tot


def metrics(y_true, scores, task, threshold=0.0):
    """Dict of metrics for a task: accuracy (+ auc when both classes occur) or r2."""
    task = Task(task)
    if task is Task.REGRESSION:
        return {"r2": r2_score(y_true, scores)}
    out = {"accuracy": accuracy(y_true, scores, threshold)}
    y = np.asarray(y_true).reshape(-1)
    if np.any(y > 0) and np.any(y <= 0):
        out["auc"] = roc_auc(y_true, scores)
    return out


def steps_to_converge(records):
    """1-based epoch at which the test metric first reaches its run maximum."""
    if not records:
        raise InvalidArgumentError("no epoch records")
    vals = np.array([r.test_metric if hasattr(r, "test_metric") else r for r in records])
    return int(np.argmax(vals)) + 1
