"""Density-matrix utilities: partial trace, Z dephasing, tomography vectors."""
import numpy as np

from ..errors import InvalidArgumentError
from .core import DensityMatrix, StateVector, _check_qubit

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def density(state):
    a = state.amplitudes
    return DensityMatrix(np.outer(a, a.conj()))


def partial_trace(rho, n_qubits, keep):
    """Reduced state on the 1-based qubits in ``keep`` (kept in ascending order)."""
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise InvalidArgumentError("keep must name at least one qubit")
    if keep[0] < 1 or keep[-1] > n_qubits:
        raise InvalidArgumentError(f"keep must be a subset of 1..{n_qubits}")
    if rho.dim != 1 << n_qubits:
        raise InvalidArgumentError("density matrix size does not match n_qubits")
    n = n_qubits
    rows = list(_LETTERS[:n])
    cols = list(_LETTERS[n : 2 * n])
    for q in range(n):
        if q + 1 not in keep:
            cols[q] = rows[q]
    out = "".join(rows[q - 1] for q in keep) + "".join(cols[q - 1] for q in keep)
    t = rho.entries.reshape([2] * (2 * n))
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = 1 << len(keep)
    return DensityMatrix(reduced.reshape(d, d))


def dephase_z(rho):
    """Drop all coherences in the computational basis."""
    return DensityMatrix(np.diag(np.diag(rho.entries)))


def tomo_vec(rho):
    """Real description of ``rho`` with d**2 - 1 entries.

    Diagonal entries except the last (fixed by the trace), then the real and
    imaginary parts of each strict upper-triangle entry in row-major order.
    """
    e = rho.entries
    d = e.shape[0]
    iu = np.triu_indices(d, 1)
    upper = e[iu]
    out = np.empty(d * d - 1)
    out[: d - 1] = e.diagonal()[:-1].real
    out[d - 1 :: 2] = upper.real
    out[d::2] = upper.imag
    return out


def expect_z(state, qubit):
    _check_qubit(state, qubit)
    n = state.n_qubits
    probs = np.abs(state.amplitudes) ** 2
    bit = (np.arange(1 << n) >> (n - qubit)) & 1
    return float(probs[bit == 0].sum() - probs[bit == 1].sum())


# -- batched forms over stacks of amplitudes (B, 2**n) -----------------------


def tomo_vec_states(amps):
    """tomo_vec of |psi><psi| for every row of ``amps``, shape (B, d**2 - 1)."""
    amps = np.atleast_2d(amps)
    b, d = amps.shape
    iu, ju = np.triu_indices(d, 1)
    upper = amps[:, iu] * amps[:, ju].conj()
    out = np.empty((b, d * d - 1))
    out[:, : d - 1] = (np.abs(amps[:, :-1]) ** 2)
    out[:, d - 1 :: 2] = upper.real
    out[:, d::2] = upper.imag
    return out


def qubit_marginals(amps, n_qubits, qubit):
    """Single-qubit reduced density matrices for every row, shape (B, 2, 2)."""
    amps = np.atleast_2d(amps)
    q = qubit - 1
    t = amps.reshape(amps.shape[0], 1 << q, 2, 1 << (n_qubits - q - 1))
    a0 = t[:, :, 0, :].reshape(amps.shape[0], -1)
    a1 = t[:, :, 1, :].reshape(amps.shape[0], -1)
    out = np.empty((amps.shape[0], 2, 2), dtype=np.complex128)
    out[:, 0, 0] = np.sum(np.abs(a0) ** 2, axis=1)
    out[:, 1, 1] = np.sum(np.abs(a1) ** 2, axis=1)
    out[:, 0, 1] = np.sum(a0 * a1.conj(), axis=1)
    out[:, 1, 0] = out[:, 0, 1].conj()
    return out


def expect_z_states(amps, n_qubits, qubit):
    amps = np.atleast_2d(amps)
    bit = (np.arange(1 << n_qubits) >> (n_qubits - qubit)) & 1
    sign = 1.0 - 2.0 * bit
    return (amps.real**2 + amps.imag**2) @ sign

