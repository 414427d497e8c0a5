import numpy as np
import pytest

from braidlab.pauli import MAX_DENSE_QUBITS, OperatorSum, PauliString, commutes, multiply, to_dense

from . import dense_pauli, random_state


@pytest.mark.parametrize("label", ["+ XIZY", "+i ZZ", "- YXIZ", "-i X"])
def test_label_text(label):
    assert PauliString.from_label(label).label() == label


def test_label_parsing():
    p = PauliString.from_label("-ZZ")
    assert p.letters == "ZZ" and p.phase == -1
    assert PauliString.from_label("XY").phase == 1
    assert PauliString.from_label("iXZ").phase == 1j
    assert str(PauliString.from_label("+i XIZY")) == "+i XIZY"

    with pytest.raises(ValueError):
        PauliString.from_label("+")
    with pytest.raises(ValueError):
        PauliString.from_label("XQ")


@pytest.mark.parametrize("letters", ["X", "Y", "Z", "XIZY", "YXIZ", "ZZII", "IYYI"])
def test_dense_matches_kron(letters):
    p = PauliString.from_label(letters)
    assert np.allclose(p.to_dense(), dense_pauli(letters))
    assert np.allclose(p.with_phase(1).to_dense(), dense_pauli(letters, 1j))


def test_qubit_zero_is_most_significant():
    p = PauliString.single(3, 0, "X")
    v = np.zeros(8, dtype=complex)
    v[0] = 1
    out = p.apply(v)
    assert out[0b100] == 1


def test_products():
    x, z = PauliString.from_label("X"), PauliString.from_label("Z")
    assert x @ z == PauliString.from_label("-i Y")
    assert z @ x == PauliString.from_label("+i Y")
    assert multiply(x, x) == PauliString.identity(1)

    a = PauliString.from_label("ZIXY")
    b = PauliString.from_label("YXIZ")
    assert np.allclose((a @ b).to_dense(), dense_pauli("ZIXY") @ dense_pauli("YXIZ"))


def test_commutation():
    assert commutes(PauliString.from_label("XX"), PauliString.from_label("ZZ"))
    assert not commutes(PauliString.from_label("XI"), PauliString.from_label("ZI"))

    with pytest.raises(ValueError):
        commutes(PauliString.from_label("X"), PauliString.from_label("XX"))


def test_properties():
    p = PauliString.from_sparse(5, {0: "X", 3: "Y"})
    assert p.support == (0, 3)
    assert p.weight == 2
    assert p.letters == "XIIYI"
    assert p.is_hermitian
    assert not p.with_phase(1).is_hermitian
    assert p.with_phase(1).strip_phase() == p
    assert p.with_phase(1).adjoint() == p.with_phase(3)
    assert -p == p.with_phase(2)

    with pytest.raises(IndexError):
        PauliString.from_sparse(2, {2: "X"})
    with pytest.raises(ValueError):
        PauliString(0)


def test_apply_matches_dense(rng):
    v = random_state(4, rng)
    for letters in ("XIZY", "YYII", "IZXI"):
        p = PauliString.from_label(letters).with_phase(1)
        assert np.allclose(p.apply(v), p.to_dense() @ v)

    block = np.stack([random_state(4, rng) for _ in range(3)], axis=1)
    p = PauliString.from_label("ZXZX")
    assert np.allclose(p.apply(block), p.to_dense() @ block)

    with pytest.raises(ValueError):
        p.apply(np.ones(8))


def test_operator_sum_algebra():
    x, z = PauliString.from_label("X"), PauliString.from_label("Z")
    s = x + z
    assert len(s) == 2
    assert np.allclose((s @ s).to_dense(), 2 * np.eye(2))
    assert np.allclose(OperatorSum.from_terms(1, [(1, x)]).commutator(z).to_dense(), -2j * dense_pauli("Y"))

    h = OperatorSum.from_labels({"ZZ": 0.5, "XX": -0.25, "+i YY": 0.0})
    assert len(h) == 2
    assert h.is_hermitian()
    assert not (h * 1j).is_hermitian()
    assert (h * 1j).adjoint().to_dense() == pytest.approx((h * -1j).to_dense())
    assert h.norm() == pytest.approx(0.75)
    assert h.coefficient(PauliString.from_label("ZZ")) == pytest.approx(0.5)
    assert h.coefficient(PauliString.from_label("-ZZ")) == pytest.approx(-0.5)
    assert h.coefficient(PauliString.from_label("YY")) == 0

    assert len(h - h) == 0
    assert len((h + 1e-14 * PauliString.from_label("IZ")).simplify()) == 2
    assert np.allclose((h + 2).to_dense(), h.to_dense() + 2 * np.eye(4))
    assert np.allclose((-h).to_dense(), -h.to_dense())


def test_operator_sum_apply(rng):
    h = OperatorSum.from_labels({"ZZI": 1.0, "XIX": 0.3, "IYY": -0.7})
    v = random_state(3, rng)
    assert np.allclose(h.apply(v), h.to_dense() @ v)


def test_dense_limit():
    p = PauliString.identity(MAX_DENSE_QUBITS + 1)
    with pytest.raises(ValueError):
        to_dense(p)
    assert to_dense(PauliString.identity(2)).shape == (4, 4)
