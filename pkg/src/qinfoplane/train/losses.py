import numpy as np

from ..errors import InvalidArgumentError

BCE_CLAMP = 1e-12


def _pair(y, yhat):
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    yhat = np.asarray(yhat, dtype=np.float64).reshape(-1)
    if y.shape != yhat.shape:
        raise InvalidArgumentError("targets and predictions differ in length")
    if y.size == 0:
        raise InvalidArgumentError("empty batch")
    return y, yhat


def mse_loss(y, yhat):
    y, yhat = _pair(y, yhat)
    return float(np.mean((y - yhat) ** 2))


def bce_loss(y01, p):
    """Binary cross-entropy in nats with probabilities clamped to [1e-12, 1 - 1e-12]."""
    y, p = _pair(y01, p)
    p = np.clip(p, BCE_CLAMP, 1.0 - BCE_CLAMP)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def comp_loss_classification(mi_data, h_y):
    """Squared distance of I(T:X) from its target H(Y)."""
    return (mi_data - h_y) ** 2


def comp_loss_regression(mi_data):
    return mi_data


def combined_loss(l_err, alpha, l_comp):
    """Multiplicative regularisation: the error term scaled by 1 + alpha * l_comp."""
    return l_err * (1.0 + alpha * l_comp)
