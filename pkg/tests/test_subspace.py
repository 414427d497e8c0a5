import math

import numpy as np
import pytest

from braidlab.model import ClockArm, SystemSpec, hamiltonian, named_conserved
from braidlab.pauli import OperatorSum, PauliString
from braidlab.subspace import (
    PAULI_2x2,
    analytic_effective,
    arm_sector,
    effective_hamiltonian,
    effective_pauli,
    gauge_align,
    idle_offset,
    labelled_operators,
    sector_selector,
    simultaneous_eigenbasis,
)


def _p(label):
    return PauliString.from_label(label)


def test_label_order():
    basis = simultaneous_eigenbasis([_p("ZI"), _p("IZ")], 2, ("a", "b"))
    assert basis.labels == ((-1, -1), (1, -1), (-1, 1), (1, 1))
    assert np.allclose(np.abs(basis.vectors[:, 0]), [0, 0, 0, 1])
    assert basis.label_dict(1) == {"a": 1, "b": -1}


def test_four_qubit_basis(four_qubit):
    ww = named_conserved(four_qubit)
    ops = [ww["W1"], ww["W2"], _p("ZZII"), _p("IIZZ")]
    basis = simultaneous_eigenbasis(ops, 4, ("W1", "W2", "h", "n"))
    assert len(basis) == 16
    assert len(set(basis.labels)) == 16
    assert basis.residual() < 1e-12

    sub = basis.sector_basis({"W1": -1, "W2": -1})
    assert len(sub) == 4
    assert sub.select(sector_selector(h=-1)) == [i for i in range(4) if sub.labels[i][2] == -1]


def test_gauge_convention():
    basis = simultaneous_eigenbasis([_p("XX")], 2, ("xx",))
    for j in range(len(basis)):
        v = basis.vectors[:, j]
        idx = int(np.argmax(np.abs(v) >= np.abs(v).max() - 1e-9))
        assert abs(v[idx].imag) < 1e-12 and v[idx].real > 0


def test_restricted_basis(four_qubit):
    ww = named_conserved(four_qubit)
    ops = [_p("IIZZ"), _p("ZZII"), ww["W1"], ww["W2"]]
    full = simultaneous_eigenbasis(ops, 4, ("n", "h", "W1", "W2"))
    pinned = simultaneous_eigenbasis(ops, 4, ("n", "h", "W1", "W2"), {"W1": -1, "W2": -1})
    assert len(pinned) == 4
    assert pinned.residual() < 1e-12
    overlap = full.sector_basis({"W1": -1, "W2": -1}).vectors.conj().T @ pinned.vectors
    assert np.allclose(np.abs(overlap), np.eye(4))


def test_basis_errors():
    with pytest.raises(ValueError):
        simultaneous_eigenbasis([_p("XI"), _p("ZI")], 2)
    with pytest.raises(ValueError):
        simultaneous_eigenbasis([_p("iZI")], 2)
    with pytest.raises(ValueError):
        simultaneous_eigenbasis([_p("ZIZ")], 2)
    with pytest.raises(ValueError):
        simultaneous_eigenbasis([_p("ZI")], 2, ("a",), {"b": 1})
    with pytest.raises(ValueError):
        simultaneous_eigenbasis([_p("ZI")], 2, ("a",), {"a": 0})
    with pytest.raises(ValueError):
        simultaneous_eigenbasis([_p("ZI"), _p("-ZI")], 2, ("a", "b"), {"a": 1, "b": 1})

    basis = simultaneous_eigenbasis([_p("ZI")], 2, ("a",))
    with pytest.raises(ValueError):
        basis.select({"b": 1})
    with pytest.raises(ValueError):
        basis.sector_basis(lambda lab: False)


def test_effective_hamiltonian(four_qubit):
    basis = simultaneous_eigenbasis([_p("ZI"), _p("IZ")], 2, ("a", "b"))
    h = OperatorSum.from_labels({"ZI": 0.5, "XX": 0.2})
    eff = effective_hamiltonian(h, basis, {"b": -1})
    assert eff.dim == 2
    assert eff.basis_labels == ((-1, -1), (1, -1))
    assert np.allclose(np.diag(eff.matrix).real, [-0.5, 0.5])
    assert np.allclose(eff.matrix, eff.matrix.conj().T)

    with pytest.raises(ValueError):
        effective_hamiltonian(h * 1j, basis)
    with pytest.raises(ValueError):
        effective_hamiltonian(h, basis, {"a": 1, "b": 2})


def test_gauge_align(rng):
    k = 4
    a = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    target = a + a.conj().T
    d = np.diag(np.exp(1j * rng.uniform(0, 2 * math.pi, k)))
    m = d @ target @ d.conj().T

    found, residual = gauge_align(m, target)
    assert residual < 1e-10
    assert np.allclose(found.conj().T @ m @ found, target)

    _, residual = gauge_align(target + 0.5 * np.eye(k), target)
    assert residual == pytest.approx(1.0)

    with pytest.raises(ValueError):
        gauge_align(np.eye(2), np.eye(3))


def test_effective_paulis():
    assert np.allclose(effective_pauli("XY"), np.kron(PAULI_2x2["X"], PAULI_2x2["Y"]))
    assert effective_pauli("ZII").shape == (8, 8)


def test_sector_selector():
    sel = sector_selector(W1=-1, h_p=-1)
    assert sel({"W1": -1, "h'": -1, "n": 1})
    assert not sel({"W1": -1, "h'": 1})


def test_arm_sectors(four_qubit, ten_qubit):
    assert len(arm_sector(four_qubit, "left")) == 4
    assert len(arm_sector(ten_qubit, "left")) == 4
    assert len(arm_sector(ten_qubit, "right")) == 4
    assert len(arm_sector(ten_qubit, "middle")) == 8
    assert arm_sector(ten_qubit, "middle").residual() < 1e-12
    assert set(labelled_operators(ten_qubit)) >= {"W1", "W6", "h_a", "n'"}

    assert idle_offset(ten_qubit, "left") == pytest.approx(-2)
    assert idle_offset(four_qubit, "left") == 0

    with pytest.raises(ValueError):
        arm_sector(four_qubit, "middle")


def test_analytic_spectrum():
    spec = SystemSpec.four_qubit(ClockArm(1.7, 1.1, 0.4))
    w = np.linalg.eigvalsh(analytic_effective(spec, "left"))
    assert np.allclose(w, [-1.7, -1.7, 1.7, 1.7])

    ten = SystemSpec.ten_qubit(middle=ClockArm(1.0, 0.9, 2.5))
    w = np.linalg.eigvalsh(analytic_effective(ten, "middle"))
    assert np.allclose(w, [-3] * 4 + [-1] * 4)


@pytest.mark.parametrize("polar", np.linspace(0, math.pi, 13))
def test_four_qubit_effective_grid(four_qubit, polar):
    sector = arm_sector(four_qubit, "left")
    for azimuth in np.linspace(0, 2 * math.pi, 13):
        spec = four_qubit.with_arm("left", ClockArm(1.0, polar, azimuth))
        m = effective_hamiltonian(hamiltonian(spec), sector)
        _, residual = gauge_align(m, analytic_effective(spec, "left"))
        assert residual <= 1e-8


@pytest.mark.parametrize("arm", ["left", "right", "middle"])
def test_ten_qubit_effective(ten_qubit, arm, rng):
    sector = arm_sector(ten_qubit, arm)
    for polar, azimuth in zip(rng.uniform(0, math.pi, 4), rng.uniform(0, 2 * math.pi, 4)):
        spec = ten_qubit.with_arm(arm, ClockArm(1.0, polar, azimuth))
        m = effective_hamiltonian(hamiltonian(spec), sector)
        _, residual = gauge_align(m, analytic_effective(spec, arm))
        assert residual <= 1e-8
