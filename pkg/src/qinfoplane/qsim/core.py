"""Statevectors, density matrices and the circuit family they are produced by.

Public qubit indices are 1-based and qubit 1 is the most significant bit of
the computational-basis index.
"""
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError, InvalidCircuitError, InvalidParametersError
from . import _fallback, backend

MAX_QUBITS = 12


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise InvalidArgumentError(f"n_qubits must be in 1..{MAX_QUBITS}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise InvalidArgumentError(
                f"expected {1 << self.n_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    @classmethod
    def zeros(cls, n_qubits):
        """The all-zero basis state |0...0>."""
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, bits):
        """Basis state from a bit string such as ``"1000"`` (qubit 1 first)."""
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    def norm_sq(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self):
        return StateVector(self.n_qubits, self.amplitudes.copy())


@dataclass
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        d = self.entries.shape[0]
        if self.entries.shape != (d, d) or d & (d - 1):
            raise InvalidArgumentError("density matrix must be square with power-of-two size")

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def n_qubits(self):
        return self.dim.bit_length() - 1


@dataclass
class CircuitSpec:
    """Layout of the re-uploading circuit.

    ``feature_assignment[f]`` is the (1-based) qubit that carries feature ``f``
    in every re-uploading layer. Each layer owns one X rotation per qubit, so
    parameters are ordered layer-major, qubit-minor.
    """

    n_qubits: int
    n_reupload_layers: int
    n_variational_layers: int
    feature_assignment: list = field(default_factory=list)

    def __post_init__(self):
        self.feature_assignment = [int(q) for q in self.feature_assignment]
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise InvalidCircuitError(f"n_qubits must be in 1..{MAX_QUBITS}")
        if self.n_reupload_layers < 0 or self.n_variational_layers < 0:
            raise InvalidCircuitError("layer counts must be nonnegative")
        fa = self.feature_assignment
        if len(set(fa)) != len(fa) or any(not 1 <= q <= self.n_qubits for q in fa):
            raise InvalidCircuitError(
                f"feature_assignment must hold distinct qubits in 1..{self.n_qubits}"
            )
        if self.n_qubits < 2 and self.n_reupload_layers + self.n_variational_layers > 0:
            raise InvalidCircuitError("the CNOT ring needs at least two qubits")

    @property
    def n_params(self):
        return self.n_qubits * (self.n_reupload_layers + self.n_variational_layers)

    @property
    def n_features(self):
        return len(self.feature_assignment)

    @property
    def layout(self):
        """Backend layout tuple with 0-based qubit indices."""
        return (
            self.n_qubits,
            self.n_reupload_layers,
            self.n_variational_layers,
            [q - 1 for q in self.feature_assignment],
        )

    def param_index(self, layer, qubit):
        """Flat index of the X rotation of 1-based ``qubit`` in 0-based ``layer``."""
        return layer * self.n_qubits + (qubit - 1)


def check_params(spec, params):
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (spec.n_params,):
        raise InvalidParametersError(
            f"circuit expects {spec.n_params} parameters, got shape {params.shape}"
        )
    if not np.all(np.isfinite(params)):
        raise InvalidParametersError("parameters must be finite")
    return params


def _check_qubit(state, qubit):
    if not 1 <= qubit <= state.n_qubits:
        raise IndexError(f"qubit {qubit} out of range 1..{state.n_qubits}")


def apply_rx(state, qubit, theta):
    """exp(-i theta/2 X) on ``qubit``, in place."""
    _check_qubit(state, qubit)
    _fallback.rx_rows(state.amplitudes[None, :], state.n_qubits, qubit - 1, np.array([theta]))
    return state


def apply_rz(state, qubit, x):
    """exp(-i x/2 Z) on ``qubit``, in place."""
    _check_qubit(state, qubit)
    _fallback.rz_rows(state.amplitudes[None, :], state.n_qubits, qubit - 1, np.array([x]))
    return state


def apply_cnot_ring(state):
    """CNOT(1,2), CNOT(2,3), ..., CNOT(N-1,N), then CNOT(N,1), in place."""
    if state.n_qubits < 2:
        raise InvalidCircuitError("the CNOT ring needs at least two qubits")
    state.amplitudes[:] = state.amplitudes[_fallback.ring_permutation(state.n_qubits)]
    return state


def run_circuit(spec, params, features):
    params = check_params(spec, params)
    features = np.asarray(features, dtype=np.float64).reshape(-1)
    if features.shape[0] != spec.n_features:
        raise InvalidArgumentError(
            f"circuit encodes {spec.n_features} features, got {features.shape[0]}"
        )
    amps = backend.run_states(params[None, :], features[None, :], spec.layout)[0, 0]
    return StateVector(spec.n_qubits, amps)


def run_circuit_batch(spec, params, features):
    """Amplitudes of the final state for each row of ``features``, shape (B, 2**n)."""
    params = check_params(spec, params)
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if features.shape[1] != spec.n_features:
        raise InvalidArgumentError(
            f"circuit encodes {spec.n_features} features, got {features.shape[1]}"
        )
    return backend.run_states(params[None, :], features, spec.layout)[0]
