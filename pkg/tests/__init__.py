"""
Utilities for unit tests: dense oracles built without the package's own
Pauli algebra.
"""
from functools import reduce

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(letters: str, phase: complex = 1) -> np.ndarray:
    """Kronecker product with qubit 0 leftmost."""
    return phase * reduce(np.kron, [PAULI[c] for c in letters])


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rz(phi: float) -> np.ndarray:
    return np.diag([1, np.exp(1j * phi)]).astype(complex)


def up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between two unitaries minimised over a global phase."""
    ov = np.vdot(a.reshape(-1), b.reshape(-1))
    phase = ov / abs(ov) if abs(ov) > 0 else 1
    return float(np.abs(a * phase - b).max())


from braidlab.exporters import CircuitExporter  # noqa: E402


class DummyExporter(CircuitExporter):
    NAME = "dummy"
    EXTENSION = ".dummy"

    def header(self, n_qubits):
        return [f"dummy {n_qubits}"]

    def gate_line(self, gate):
        return f"{gate.qubit_a}-{gate.qubit_b}"
