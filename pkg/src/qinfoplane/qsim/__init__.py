"""Dense statevector simulation of the re-uploading circuit family."""
from . import backend
from .core import (
    CircuitSpec,
    DensityMatrix,
    StateVector,
    apply_cnot_ring,
    apply_rx,
    apply_rz,
    check_params,
    run_circuit,
    run_circuit_batch,
)
from .info import (
    density,
    dephase_z,
    expect_z,
    expect_z_states,
    partial_trace,
    qubit_marginals,
    tomo_vec,
    tomo_vec_states,
)

__all__ = [
    "backend",
    "CircuitSpec",
    "DensityMatrix",
    "StateVector",
    "apply_cnot_ring",
    "apply_rx",
    "apply_rz",
    "check_params",
    "run_circuit",
    "run_circuit_batch",
    "density",
    "dephase_z",
    "expect_z",
    "expect_z_states",
    "partial_trace",
    "qubit_marginals",
    "tomo_vec",
    "tomo_vec_states",
]
