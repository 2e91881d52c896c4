"""Dense front-end, 3-qubit Z-rotation circuit read out in the Y basis, dense head.

Circuit per sample: an optional fixed RX(pi/2) on every qubit, then for each
layer an RZ on every qubit followed by the CNOT ring. In the first layer the
RZ angle is ``front_output_i + phi[0, i]``; later layers use ``phi[l, i]``.
The fixed RX(pi/2) moves the qubits off the Z axis: without it every gate
is diagonal or a permutation on |000> and the Y read-out is constant.
"""
from dataclasses import dataclass

import numpy as np

from ..qsim import _fallback
from .dense import DenseNet, dense_backward, dense_forward
from .pqc import SHIFT

N_QUBITS = 3


@dataclass
class HybridModel:
    front: DenseNet
    phi: np.ndarray
    head: DenseNet
    basis_change: bool = True

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=np.float64)
        if self.phi.ndim != 2 or self.phi.shape[1] != N_QUBITS:
            raise ValueError(f"phi must have shape (layers, {N_QUBITS})")
        if self.front.layer_dims[-1] != N_QUBITS or self.head.layer_dims[0] != N_QUBITS:
            raise ValueError("front output and head input must match the qubit count")

    @property
    def n_layers(self):
        return self.phi.shape[0]

    @classmethod
    def init(cls, n_inputs, rng, hidden=42, n_layers=3, basis_change=True):
        front = DenseNet.init([n_inputs, hidden, N_QUBITS], rng, output_activation="relu")
        head = DenseNet.init([N_QUBITS, 1], rng, output_activation="identity")
        phi = rng.uniform(0.0, 2 * np.pi, (n_layers, N_QUBITS))
        return cls(front, phi, head, basis_change)


def _y_signs(n):
    dim = 1 << n
    return [(np.arange(dim) >> (n - 1 - q)) & 1 for q in range(n)]


def vqc_expect_y(angles, phi, basis_change=True):
    """<sigma_Y> per qubit, shape (N, 3).

    ``angles`` is (N, 3); ``phi`` is (N, layers, 3) or (layers, 3).
    """
    angles = np.atleast_2d(angles)
    rows = angles.shape[0]
    phi = np.broadcast_to(phi, (rows,) + np.shape(phi)[-2:])
    n = N_QUBITS
    st = np.zeros((rows, 1 << n), dtype=np.complex128)
    st[:, 0] = 1.0
    if basis_change:
        half_pi = np.full(rows, np.pi / 2)
        for q in range(n):
            _fallback.rx_rows(st, n, q, half_pi)
    for layer in range(phi.shape[1]):
        for q in range(n):
            ang = phi[:, layer, q] + (angles[:, q] if layer == 0 else 0.0)
            _fallback.rz_rows(st, n, q, ang)
        st = _fallback.cnot_ring_rows(st, n)
    out = np.empty((rows, n))
    for q, bit in enumerate(_y_signs(n)):
        a0 = st[:, bit == 0]
        a1 = st[:, bit == 1]
        out[:, q] = 2.0 * np.sum((a0.conj() * a1).imag, axis=1)
    return out


def vqc_jacobian(angles, phi, basis_change=True):
    """Outputs (N, 3) and d output / d phi, shape (N, 3, layers, 3), by parameter shift.

    The input angle of qubit i enters exactly like phi[0, i], so its derivative
    is the slice ``[..., 0, :]``.
    """
    angles = np.atleast_2d(angles)
    rows = angles.shape[0]
    n_layers, n = np.shape(phi)
    k = n_layers * n
    shifts = np.zeros((2 * k + 1, n_layers, n))
    idx = np.arange(k)
    shifts.reshape(2 * k + 1, k)[1 + 2 * idx, idx] = SHIFT
    shifts.reshape(2 * k + 1, k)[2 + 2 * idx, idx] = -SHIFT
    all_phi = (np.asarray(phi)[None] + shifts)  # (S, L, 3)
    s = all_phi.shape[0]
    ang = np.repeat(angles, s, axis=0)
    ph = np.tile(all_phi, (rows, 1, 1))
    ev = vqc_expect_y(ang, ph, basis_change).reshape(rows, s, n)
    jac = 0.5 * (ev[:, 1::2, :] - ev[:, 2::2, :])  # (B, k, 3)
    return ev[:, 0, :], jac.transpose(0, 2, 1).reshape(rows, n, n_layers, n)


def hybrid_forward(model, features):
    """Scalar prediction per sample, shape (B,)."""
    angles, _ = dense_forward(model.front, features)
    y = vqc_expect_y(angles, model.phi, model.basis_change)
    out, _ = dense_forward(model.head, y)
    return out[:, 0]


@dataclass
class HybridGrads:
    front: object
    phi: np.ndarray
    head: object

    def flat(self):
        return np.concatenate([self.front.flat(), self.phi.ravel(), self.head.flat()])


def hybrid_backward(model, features, output_gradient):
    """Gradients of sum(prediction * output_gradient) w.r.t. every parameter."""
    angles, fcache = dense_forward(model.front, features)
    y, jac = vqc_jacobian(angles, model.phi, model.basis_change)
    out, hcache = dense_forward(model.head, y)
    g = np.asarray(output_gradient, dtype=np.float64).reshape(-1, 1)
    hg = dense_backward(model.head, hcache, g)
    dy = hg.inputs  # (B, 3)
    gphi = np.einsum("bo,bolq->lq", dy, jac)
    dangles = np.einsum("bo,boq->bq", dy, jac[:, :, 0, :])
    fg = dense_backward(model.front, fcache, dangles)
    return HybridGrads(fg, gphi, hg)


def get_flat(model):
    return np.concatenate([model.front.get_flat(), model.phi.ravel(), model.head.get_flat()])


def set_flat(model, vec):
    nf = model.front.n_params
    npf = model.phi.size
    model.front.set_flat(vec[:nf])
    model.phi = np.asarray(vec[nf : nf + npf], dtype=np.float64).reshape(model.phi.shape).copy()
    model.head.set_flat(vec[nf + npf :])
