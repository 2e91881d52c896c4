"""Selects the compiled kernels when importable, the numpy fallback otherwise.

Set ``QINFOPLANE_BACKEND=python`` to force the fallback.
"""
import os

import numpy as np

from . import _fallback

try:
    from . import _kernels
except ImportError:  # pragma: no cover - depends on the build
    _kernels = None

_num_threads = 1

if os.environ.get("QINFOPLANE_BACKEND", "").lower() in ("python", "numpy", "fallback"):
    _active = "python"
else:
    _active = "compiled" if _kernels is not None else "python"


def compiled_available():
    return _kernels is not None


def active():
    """Name of the backend in use: ``"compiled"`` or ``"python"``."""
    return _active


def use(name):
    global _active
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _kernels is None:
        raise RuntimeError("compiled kernels are not available in this build")
    _active = name


def set_num_threads(n):
    """Worker threads for the compiled kernels (results do not depend on it)."""
    global _num_threads
    _num_threads = max(1, int(n))


def _prep(thetas, features, assign):
    thetas = np.ascontiguousarray(np.atleast_2d(thetas), dtype=np.float64)
    features = np.ascontiguousarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features[None, :]
    assign = np.ascontiguousarray(assign, dtype=np.intc)
    return thetas, features, assign


def run_states(thetas, features, layout, backend=None):
    """Final states of the circuit for all (parameter row, sample) pairs.

    ``layout`` is ``(n_qubits, n_reupload, n_variational, assign0)`` with
    0-based qubit indices in ``assign0``. Returns an array (R, B, 2**n).
    """
    n, n_reup, n_var, assign = layout
    thetas, features, assign = _prep(thetas, features, assign)
    if (backend or _active) == "compiled":
        return _kernels.run_states(thetas, features, n, n_reup, n_var, assign, _num_threads)
    return _fallback.run_states(thetas, features, n, n_reup, n_var, assign)


def expect_z(thetas, features, layout, readout0, backend=None):
    """<sigma_Z> on 0-based qubit ``readout0`` for all pairs, shape (R, B)."""
    n, n_reup, n_var, assign = layout
    thetas, features, assign = _prep(thetas, features, assign)
    if (backend or _active) == "compiled":
        return _kernels.expect_z(
            thetas, features, n, n_reup, n_var, assign, readout0, _num_threads
        )
    return _fallback.expect_z(thetas, features, n, n_reup, n_var, assign, readout0)
