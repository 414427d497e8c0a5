import math

import numpy as np
import pytest

from braidlab.engine import NoiseModel, QuantumState
from braidlab.model import logical_basis, logical_operators
from braidlab.protocol import clock_path, gate_preset, plan_for_gate, prepare_logical, trotterize
from braidlab.tomography import (
    ChoiMatrix,
    SingularInputsError,
    choi_from_inputs,
    choi_from_outputs,
    choi_of_unitary,
    input_labels,
    input_states,
    logical_pauli_frame,
    positivity_projection,
    process_fidelity,
    process_tomography,
    state_fidelity,
    state_tomography,
)

from . import haar_unitary, rz

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)


def test_reference_fidelities():
    ident = choi_of_unitary(I2)
    assert process_fidelity(ident, ident) == pytest.approx(1, abs=1e-10)
    assert process_fidelity(ident, choi_of_unitary(X2)) == pytest.approx(0, abs=1e-10)
    assert process_fidelity(ident, choi_of_unitary(rz(math.pi / 2))) == pytest.approx(0.5, abs=1e-10)
    assert ident.trace == pytest.approx(2)
    assert ident.is_physical()

    with pytest.raises(ValueError):
        process_fidelity(ident, choi_of_unitary(np.eye(4)))
    with pytest.raises(ValueError):
        ChoiMatrix(2, np.eye(3))


@pytest.mark.parametrize("d", [2, 4])
def test_linear_inversion_of_unitaries(d, rng):
    for _ in range(20):
        u = haar_unitary(d, rng)
        v = haar_unitary(d, rng)
        choi = choi_from_inputs(lambda r: v @ r @ v.conj().T, d)
        assert np.allclose(choi.matrix, choi_of_unitary(v).matrix, atol=1e-10)
        expected = abs(np.trace(u.conj().T @ v)) ** 2 / d ** 2
        assert process_fidelity(choi_of_unitary(u), choi) == pytest.approx(expected, abs=1e-8)


def test_input_set():
    labels = input_labels(4)
    assert len(labels) == 16
    assert labels[:2] == [("0", "0"), ("0", "1")]
    assert labels[-1] == ("i+", "i+")
    assert len(input_states(2)) == 4
    with pytest.raises(ValueError):
        input_labels(8)


def test_singular_inputs():
    rho = input_states(2)[0]
    with pytest.raises(SingularInputsError):
        choi_from_outputs([rho] * 4, [rho] * 4, 2)
    with pytest.raises(SingularInputsError):
        choi_from_outputs([rho] * 3, [rho] * 3, 2)


def test_positivity_projection():
    ident = choi_of_unitary(I2)
    same, clipped = positivity_projection(ident)
    assert not clipped
    assert np.allclose(same.matrix, ident.matrix)

    m = ident.matrix.copy()
    m[1, 1] -= 0.1
    m[2, 2] += 0.1
    bad = ChoiMatrix(2, m)
    assert not bad.is_physical()

    fixed, clipped = positivity_projection(bad)
    assert clipped
    assert fixed.min_eigenvalue() >= -1e-12
    assert fixed.trace == pytest.approx(2)
    assert fixed.hermiticity_residual() < 1e-12


def test_state_fidelity():
    zero = np.diag([1, 0]).astype(complex)
    mixed = I2 / 2
    assert state_fidelity(zero, zero) == pytest.approx(1)
    assert state_fidelity(zero, mixed) == pytest.approx(0.5)
    assert state_fidelity(mixed, zero) == pytest.approx(0.5)
    assert state_fidelity(mixed, mixed) == pytest.approx(1)


def test_pauli_frame(ten_qubit, four_qubit):
    frame = logical_pauli_frame(logical_operators(four_qubit))
    assert [f[0] for f in frame] == ["I", "X", "Y", "Z"]
    assert frame[0][1] is None
    assert len(logical_pauli_frame(logical_operators(ten_qubit))) == 16


@pytest.mark.parametrize("label", ["0", "1", "+", "i+"])
def test_exact_state_tomography(four_qubit, label):
    from braidlab.protocol import logical_vector

    rho = state_tomography(prepare_logical(label, four_qubit), logical_operators(four_qubit))
    v = logical_vector([label])
    assert np.allclose(rho.matrix, np.outer(v, v.conj()), atol=1e-10)
    assert rho.min_eigenvalue == pytest.approx(0, abs=1e-10)


def test_two_qubit_state_tomography(ten_qubit):
    state = prepare_logical(("0", "i+"), ten_qubit)
    rho = state_tomography(state, logical_operators(ten_qubit))
    expected = np.kron(np.diag([1, 0]), 0.5 * np.array([[1, -1j], [1j, 1]]))
    assert rho.dim == 4
    assert np.allclose(rho.matrix, expected, atol=1e-10)


def test_sampled_state_tomography(four_qubit, rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    state = QuantumState.from_vector(logical_basis(four_qubit) @ v)
    ops = logical_operators(four_qubit)

    exact = state_tomography(state, ops).matrix
    shots = 1 << 13
    sampled = state_tomography(state, ops, shots, seed=3).matrix
    assert np.abs(sampled - exact).max() <= 5 / math.sqrt(shots)
    assert np.allclose(sampled, state_tomography(state, ops, shots, seed=3).matrix)
    assert not np.allclose(sampled, state_tomography(state, ops, shots, seed=4).matrix)
    assert np.trace(sampled).real == pytest.approx(1)


def test_identity_process(four_qubit):
    report = process_tomography(plan_for_gate("I"), four_qubit, I2)
    assert report.process_fidelity == pytest.approx(1, abs=1e-10)
    assert all(f == pytest.approx(1, abs=1e-10) for _, f in report.state_fidelities)
    assert len(report.state_fidelities) == 4
    assert not report.clipped
    assert report.choi.is_physical()

    with pytest.raises(ValueError):
        process_tomography(plan_for_gate("I"), four_qubit, np.eye(4))


def test_adiabatic_s_process(four_qubit):
    plan = trotterize(clock_path(math.pi / 2), 0.05, 1000)
    report = process_tomography(plan, four_qubit, gate_preset("S").ideal)
    assert report.process_fidelity >= 0.99
    assert min(f for _, f in report.state_fidelities) >= 0.99


@pytest.mark.slow
def test_noise_lowers_fidelity(four_qubit):
    plan = plan_for_gate("S")
    ideal = gate_preset("S").ideal
    clean = process_tomography(plan, four_qubit, ideal).process_fidelity
    noisy = process_tomography(plan, four_qubit, ideal, NoiseModel(0.02)).process_fidelity
    noisier = process_tomography(plan, four_qubit, ideal, NoiseModel(0.1)).process_fidelity
    assert clean > noisy > noisier


@pytest.mark.slow
def test_rxx_tomography_inputs(ten_qubit):
    report = process_tomography(plan_for_gate("Rxx"), ten_qubit, gate_preset("Rxx").ideal)
    assert len(report.state_fidelities) == 16
    assert report.choi.d == 4
