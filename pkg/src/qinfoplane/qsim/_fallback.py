"""Pure-numpy batched simulation of the re-uploading circuit family.

Every function works on a stack of statevectors of shape ``(N, 2**n)`` with
one rotation angle per row. Qubit indices here are 0-based with qubit 0 the
most significant bit of the basis index.
"""
from functools import lru_cache

import numpy as np

# Rows per chunk when a (params x samples) grid is simulated; bounds memory
# to roughly _CHUNK_AMPS complex amplitudes.
_CHUNK_AMPS = 1 << 21


def rx_rows(states, n, q, theta):
    s = states.reshape(states.shape[0], 1 << q, 2, 1 << (n - q - 1))
    c = np.cos(0.5 * theta)[:, None, None]
    sn = np.sin(0.5 * theta)[:, None, None]
    a0 = s[:, :, 0, :].copy()
    a1 = s[:, :, 1, :]
    s[:, :, 0, :] = c * a0 - 1j * sn * a1
    s[:, :, 1, :] = c * a1 - 1j * sn * a0
    return states


def rz_rows(states, n, q, angle):
    s = states.reshape(states.shape[0], 1 << q, 2, 1 << (n - q - 1))
    ph = np.exp(-0.5j * angle)[:, None, None]
    s[:, :, 0, :] *= ph
    s[:, :, 1, :] *= np.conj(ph)
    return states


@lru_cache(maxsize=None)
def ring_permutation(n):
    """Index map ``p`` with ``new = old[:, p]`` for the CNOT ring on n qubits.

    Gates act as CNOT(0,1), CNOT(1,2), ..., CNOT(n-2,n-1), then CNOT(n-1,0).
    """
    dim = 1 << n
    image = np.arange(dim)
    pairs = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    for c, t in pairs:
        cm = 1 << (n - 1 - c)
        tm = 1 << (n - 1 - t)
        image = np.where(image & cm, image ^ tm, image)
    perm = np.empty(dim, dtype=np.intp)
    perm[image] = np.arange(dim)
    perm.setflags(write=False)
    return perm


def cnot_ring_rows(states, n):
    return states[:, ring_permutation(n)]


def simulate_rows(thetas, features, n, n_reup, n_var, assign):
    """Run one circuit per row. ``thetas`` is (N, P), ``features`` is (N, F)."""
    rows = thetas.shape[0]
    states = np.zeros((rows, 1 << n), dtype=np.complex128)
    states[:, 0] = 1.0
    k = 0
    for layer in range(n_reup + n_var):
        for q in range(n):
            rx_rows(states, n, q, thetas[:, k])
            k += 1
        if layer < n_reup:
            for f, q in enumerate(assign):
                rz_rows(states, n, q, features[:, f])
        if n > 1:
            states = cnot_ring_rows(states, n)
    return states


def _grid_chunks(n_params_rows, n_samples, dim):
    per_chunk = max(1, _CHUNK_AMPS // (dim * max(n_samples, 1)))
    for start in range(0, n_params_rows, per_chunk):
        yield start, min(n_params_rows, start + per_chunk)


def run_states(thetas, features, n, n_reup, n_var, assign):
    """States for every (parameter row, sample) pair, shape (R, B, 2**n)."""
    r, b = thetas.shape[0], features.shape[0]
    th = np.repeat(thetas, b, axis=0)
    xs = np.tile(features, (r, 1))
    return simulate_rows(th, xs, n, n_reup, n_var, assign).reshape(r, b, 1 << n)


def expect_z(thetas, features, n, n_reup, n_var, assign, readout):
    """<sigma_Z> on ``readout`` for every (parameter row, sample) pair, (R, B)."""
    r, b = thetas.shape[0], features.shape[0]
    dim = 1 << n
    sign = np.where(np.arange(dim) & (1 << (n - 1 - readout)), -1.0, 1.0)
    out = np.empty((r, b))
    for lo, hi in _grid_chunks(r, b, dim):
        st = run_states(thetas[lo:hi], features, n, n_reup, n_var, assign)
        out[lo:hi] = (st.real**2 + st.imag**2) @ sign
    return out
