import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qinfoplane.errors import InvalidArgumentError, InvalidCircuitError, InvalidParametersError
from qinfoplane.qsim import (
    CircuitSpec,
    DensityMatrix,
    StateVector,
    apply_cnot_ring,
    apply_rx,
    apply_rz,
    backend,
    density,
    dephase_z,
    expect_z,
    partial_trace,
    run_circuit,
    tomo_vec,
)

from oracles import Z, circuit_unitary, cnot, partial_trace_loops, random_state

S2 = 1 / np.sqrt(2)


def sv(amps):
    amps = np.asarray(amps, dtype=complex)
    return StateVector(int(np.log2(len(amps))), amps)


class TestRotations:
    def test_rx_zero_is_identity(self):
        psi = sv(random_state(np.random.default_rng(1), 3))
        before = psi.amplitudes.copy()
        apply_rx(psi, 2, 0.0)
        np.testing.assert_allclose(psi.amplitudes, before, atol=1e-15)

    def test_rx_pi_on_zero(self):
        psi = apply_rx(StateVector.zeros(1), 1, np.pi)
        np.testing.assert_allclose(psi.amplitudes, [0, -1j], atol=1e-15)

    def test_rx_half_pi_on_zero(self):
        psi = apply_rx(StateVector.zeros(1), 1, np.pi / 2)
        np.testing.assert_allclose(psi.amplitudes, [S2, -1j * S2], atol=1e-15)

    def test_rz_zero_is_identity(self):
        psi = sv(random_state(np.random.default_rng(2), 2))
        before = psi.amplitudes.copy()
        apply_rz(psi, 1, 0.0)
        np.testing.assert_allclose(psi.amplitudes, before, atol=1e-15)

    def test_rz_pi_on_plus(self):
        psi = apply_rz(sv([S2, S2]), 1, np.pi)
        expected = [S2 * np.exp(-1j * np.pi / 2), S2 * np.exp(1j * np.pi / 2)]
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-15)

    @pytest.mark.parametrize("x", [0.3, -2.0, 5.5])
    def test_rz_on_zero_is_global_phase(self, x):
        psi = apply_rz(StateVector.zeros(1), 1, x)
        assert abs(abs(psi.amplitudes[0]) - 1) < 1e-15
        assert expect_z(psi, 1) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("q", [0, 4])
    def test_qubit_out_of_range(self, q):
        with pytest.raises(IndexError):
            apply_rx(StateVector.zeros(3), q, 0.1)
        with pytest.raises(IndexError):
            apply_rz(StateVector.zeros(3), q, 0.1)


class TestCnotRing:
    def test_all_zero_fixed(self):
        psi = apply_cnot_ring(StateVector.zeros(2))
        np.testing.assert_array_equal(psi.amplitudes, [1, 0, 0, 0])

    def test_two_qubits_against_matrix_product(self):
        oracle = cnot(2, 1, 2) @ cnot(1, 2, 2)
        e10 = np.array([0, 0, 1, 0], dtype=complex)
        np.testing.assert_array_equal(oracle @ e10, [0, 1, 0, 0])
        psi = apply_cnot_ring(StateVector.basis("10"))
        np.testing.assert_array_equal(psi.amplitudes, oracle @ e10)

    def test_four_qubits_1000(self):
        from oracles import ring

        # ascending order cascades the excitation: 1000 -> 1100 -> 1110 -> 1111 -> 0111
        e = np.zeros(16, dtype=complex)
        e[int("1000", 2)] = 1
        oracle = ring(4) @ e
        assert np.argmax(np.abs(oracle)) == int("0111", 2)
        psi = apply_cnot_ring(StateVector.basis("1000"))
        np.testing.assert_array_equal(psi.amplitudes, oracle)

    def test_four_qubits_random_against_dense(self):
        from oracles import ring

        a = random_state(np.random.default_rng(5), 4)
        psi = apply_cnot_ring(sv(a.copy()))
        np.testing.assert_allclose(psi.amplitudes, ring(4) @ a, atol=1e-15)

    def test_single_qubit_rejected(self):
        with pytest.raises(InvalidCircuitError):
            apply_cnot_ring(StateVector.zeros(1))


class TestRunCircuit:
    spec = CircuitSpec(4, 3, 2, [1, 2, 3])

    def test_all_zero(self):
        psi = run_circuit(self.spec, np.zeros(20), np.zeros(3))
        expected = np.zeros(16)
        expected[0] = 1
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_unitary_product(self, seed):
        rng = np.random.default_rng(seed)
        theta = rng.uniform(-np.pi, np.pi, 20)
        x = rng.uniform(0, np.pi, 3)
        u = circuit_unitary(4, 3, 2, [1, 2, 3], theta, x)
        psi = run_circuit(self.spec, theta, x)
        np.testing.assert_allclose(psi.amplitudes, u[:, 0], atol=1e-10)

    def test_swapping_layers_changes_state(self):
        rng = np.random.default_rng(11)
        theta = rng.uniform(0, 2 * np.pi, 20)
        x = rng.uniform(0, np.pi, 3)
        swapped = theta.copy()
        swapped[[0, 17]] = swapped[[17, 0]]
        a = run_circuit(self.spec, theta, x).amplitudes
        b = run_circuit(self.spec, swapped, x).amplitudes
        ua = circuit_unitary(4, 3, 2, [1, 2, 3], swapped, x)[:, 0]
        np.testing.assert_allclose(b, ua, atol=1e-10)
        assert np.max(np.abs(a - b)) > 1e-3

    def test_param_length_mismatch(self):
        with pytest.raises(InvalidParametersError):
            run_circuit(self.spec, np.zeros(19), np.zeros(3))

    def test_feature_length_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            run_circuit(self.spec, np.zeros(20), np.zeros(2))

    def test_non_finite_params(self):
        p = np.zeros(20)
        p[3] = np.nan
        with pytest.raises(InvalidParametersError):
            run_circuit(self.spec, p, np.zeros(3))

    def test_spec_parameter_count(self):
        assert CircuitSpec(12, 2, 1, list(range(1, 13))).n_params == 36

    @pytest.mark.parametrize("assign", [[1, 1], [0], [5]])
    def test_bad_assignment(self, assign):
        with pytest.raises(InvalidCircuitError):
            CircuitSpec(4, 1, 1, assign)


class TestDensity:
    def test_zero(self):
        np.testing.assert_array_equal(density(StateVector.zeros(1)).entries, [[1, 0], [0, 0]])

    def test_plus(self):
        np.testing.assert_allclose(density(sv([S2, S2])).entries, np.full((2, 2), 0.5))

    def test_random_purity(self):
        rho = density(sv(random_state(np.random.default_rng(3), 3))).entries
        assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.matrix_rank(rho, tol=1e-10) == 1


class TestPartialTrace:
    def test_product_state(self):
        psi = sv(np.kron([1, 0], [S2, S2]))
        red = partial_trace(density(psi), 2, {2})
        np.testing.assert_allclose(red.entries, np.full((2, 2), 0.5), atol=1e-15)

    def test_bell(self):
        red = partial_trace(density(sv([S2, 0, 0, S2])), 2, {1})
        np.testing.assert_allclose(red.entries, np.eye(2) / 2, atol=1e-15)

    @pytest.mark.parametrize("keep", [{1}, {2}, {3}, {1, 3}, {2, 3}, {1, 2, 3}])
    def test_matches_index_contraction(self, keep):
        rho = density(sv(random_state(np.random.default_rng(7), 3)))
        red = partial_trace(rho, 3, keep)
        np.testing.assert_allclose(red.entries, partial_trace_loops(rho.entries, 3, keep),
                                   atol=1e-10)

    def test_empty_keep(self):
        with pytest.raises(InvalidArgumentError):
            partial_trace(density(StateVector.zeros(2)), 2, set())


class TestDephaseAndTomography:
    def test_diagonal_unchanged(self):
        rho = DensityMatrix(np.diag([0.3, 0.7]))
        np.testing.assert_array_equal(dephase_z(rho).entries, rho.entries)

    def test_plus_to_mixed(self):
        np.testing.assert_allclose(
            dephase_z(density(sv([S2, S2]))).entries, np.eye(2) / 2, atol=1e-15
        )

    def test_matches_pauli_twirl(self):
        rho = density(sv(random_state(np.random.default_rng(4), 1))).entries
        twirl = 0.5 * (rho + Z @ rho @ Z)
        np.testing.assert_allclose(dephase_z(DensityMatrix(rho)).entries, twirl, atol=1e-15)

    def test_tomo_zero(self):
        np.testing.assert_array_equal(tomo_vec(density(StateVector.zeros(1))), [1, 0, 0])

    def test_tomo_mixed(self):
        np.testing.assert_allclose(tomo_vec(DensityMatrix(np.eye(2) / 2)), [0.5, 0, 0])

    def test_tomo_dephased_coherences_vanish(self):
        rho = density(sv(random_state(np.random.default_rng(8), 1)))
        t = tomo_vec(dephase_z(rho))
        assert t[0] == pytest.approx(rho.entries[0, 0].real)
        assert t[1] == 0 and t[2] == 0

    def test_tomo_ordering_two_qubits(self):
        e = np.arange(16).reshape(4, 4) + 1j * np.arange(16).reshape(4, 4) * 10
        t = tomo_vec(DensityMatrix(e))
        assert t.shape == (15,)
        np.testing.assert_array_equal(t[:3], [0, 5, 10])
        # (0,1), (0,2), (0,3), (1,2), ...
        np.testing.assert_array_equal(t[3:9], [1, 10, 2, 20, 3, 30])


class TestExpectZ:
    @pytest.mark.parametrize("amps, val", [([1, 0], 1.0), ([0, 1], -1.0), ([S2, S2], 0.0)])
    def test_single_qubit(self, amps, val):
        assert expect_z(sv(amps), 1) == pytest.approx(val, abs=1e-15)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            expect_z(StateVector.zeros(2), 3)


# -- properties ---------------------------------------------------------------


def test_norm_preserved_over_random_gates():
    rng = np.random.default_rng(123)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 6))
        psi = sv(random_state(rng, n))
        kind = rng.integers(3)
        if kind == 0:
            apply_rx(psi, int(rng.integers(1, n + 1)), rng.uniform(-10, 10))
        elif kind == 1:
            apply_rz(psi, int(rng.integers(1, n + 1)), rng.uniform(-10, 10))
        else:
            apply_cnot_ring(psi)
        worst = max(worst, abs(psi.norm_sq() - 1))
    assert worst < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    n=st.integers(1, 4),
    data=st.data(),
)
def test_partial_trace_contract(seed, n, data):
    keep = data.draw(st.sets(st.integers(1, n), min_size=1))
    rho = density(sv(random_state(np.random.default_rng(seed), n)))
    red = partial_trace(rho, n, keep).entries
    assert abs(np.trace(red) - 1) < 1e-10
    np.testing.assert_allclose(red, red.conj().T, atol=1e-10)
    assert np.linalg.eigvalsh(red).min() >= -1e-8


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 3))
def test_dephasing_idempotent(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    rho = a @ a.conj().T
    rho = DensityMatrix(rho / np.trace(rho))
    once = dephase_z(rho)
    np.testing.assert_array_equal(dephase_z(once).entries, once.entries)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 5))
def test_expect_z_matches_marginal_diagonal(seed, n):
    psi = sv(random_state(np.random.default_rng(seed), n))
    d = np.diag(partial_trace(density(psi), n, {1}).entries).real
    assert expect_z(psi, 1) == pytest.approx(d[0] - d[1], abs=1e-10)


@pytest.mark.skipif(not backend.compiled_available(), reason="compiled kernels not built")
class TestBackendsAgree:
    @pytest.mark.parametrize("layout", [(4, 3, 2, [0, 1, 2]), (2, 1, 0, [1]), (6, 2, 1, [0, 3, 5])])
    def test_states_and_expectations(self, layout):
        rng = np.random.default_rng(0)
        n, r, v, assign = layout
        th = rng.uniform(-4, 4, (5, n * (r + v)))
        x = rng.uniform(0, 4, (7, len(assign)))
        a = backend.run_states(th, x, layout, "compiled")
        b = backend.run_states(th, x, layout, "python")
        np.testing.assert_allclose(a, b, atol=1e-12)
        for ro in range(n):
            np.testing.assert_allclose(
                backend.expect_z(th, x, layout, ro, "compiled"),
                backend.expect_z(th, x, layout, ro, "python"),
                atol=1e-12,
            )

    def test_thread_count_does_not_change_results(self):
        rng = np.random.default_rng(1)
        layout = (4, 3, 2, [0, 1, 2])
        th = rng.uniform(-4, 4, (9, 20))
        x = rng.uniform(0, 4, (33, 3))
        one = backend.expect_z(th, x, layout, 0, "compiled")
        backend.set_num_threads(3)
        try:
            three = backend.expect_z(th, x, layout, 0, "compiled")
        finally:
            backend.set_num_threads(1)
        np.testing.assert_array_equal(one, three)
