"""Re-uploading PQC read out through <sigma_Z> on one qubit."""
from dataclasses import dataclass

import numpy as np

from ..qsim import backend
from ..qsim.core import CircuitSpec, check_params

SHIFT = np.pi / 2


@dataclass
class PqcModel:
    spec: CircuitSpec
    params: np.ndarray
    readout_qubit: int = 1

    def __post_init__(self):
        self.params = check_params(self.spec, self.params)
        if not 1 <= self.readout_qubit <= self.spec.n_qubits:
            raise IndexError(f"readout qubit {self.readout_qubit} out of range")

    @classmethod
    def init(cls, spec, rng, low=0.0, high=1.0, readout_qubit=1):
        """Angles drawn uniformly from [low, high)."""
        return cls(spec, rng.uniform(low, high, spec.n_params), readout_qubit)


def _as_batch(model, features):
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if x.shape[1] != model.spec.n_features:
        raise ValueError(
            f"model encodes {model.spec.n_features} features, got {x.shape[1]}"
        )
    return x


def pqc_forward_batch(model, features):
    x = _as_batch(model, features)
    return backend.expect_z(model.params, x, model.spec.layout, model.readout_qubit - 1)[0]


def pqc_forward(model, features):
    return float(pqc_forward_batch(model, features)[0])


def sign_labels(values):
    """Sign with the tie sign(0) = +1."""
    return np.where(np.asarray(values) >= 0, 1, -1)


def pqc_predict(model, features):
    return int(sign_labels(pqc_forward(model, features)))


def shifted_params(params, shift=SHIFT):
    """Rows [theta, theta + s e_0, theta - s e_0, theta + s e_1, ...]."""
    p = params.shape[0]
    rows = np.tile(params, (2 * p + 1, 1))
    k = np.arange(p)
    rows[1 + 2 * k, k] += shift
    rows[2 + 2 * k, k] -= shift
    return rows


def pqc_jacobian(model, features):
    """Outputs (B,) and d output / d theta (B, P) by the parameter-shift rule."""
    x = _as_batch(model, features)
    ev = backend.expect_z(
        shifted_params(model.params), x, model.spec.layout, model.readout_qubit - 1
    )
    return ev[0], (0.5 * (ev[1::2] - ev[2::2])).T
