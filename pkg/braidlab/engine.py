"""
Dense statevector / density matrix simulation
"""
import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .pauli import MAX_DENSE_QUBITS, OperatorSum, PauliString, to_dense

NORM_TOLERANCE = 1e-10

Operator = Union[PauliString, OperatorSum]

_SQRT2_INV = 1 / math.sqrt(2)
_T = np.exp(1j * math.pi / 4)
_GATE_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, _T]], dtype=complex),
    "TDG": np.array([[1, 0], [0, np.conj(_T)]], dtype=complex),
}
_GATE_1Q_PARAM = {
    "RX": lambda t: np.array(
        [[math.cos(t / 2), -1j * math.sin(t / 2)], [-1j * math.sin(t / 2), math.cos(t / 2)]]
    ),
    "RY": lambda t: np.array(
        [[math.cos(t / 2), -math.sin(t / 2)], [math.sin(t / 2), math.cos(t / 2)]], dtype=complex
    ),
    "RZ": lambda t: np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]]),
}


def gate_matrix(name: str, angle: float = 0.0) -> np.ndarray:
    name = name.upper()
    if name in _GATE_1Q:
        return _GATE_1Q[name]
    try:
        return _GATE_1Q_PARAM[name](angle)
    except KeyError:
        raise ValueError(f"Unknown gate '{name}'") from None


class StateMode(Enum):
    PURE = "pure"
    DENSITY = "density"


@dataclass(frozen=True)
class QuantumState:
    n_qubits: int
    data: np.ndarray
    mode: StateMode = StateMode.PURE

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_DENSE_QUBITS:
            raise ValueError(f"Unsupported qubit count: {self.n_qubits}")
        dim = 1 << self.n_qubits
        data = np.array(self.data, dtype=complex)
        if self.mode is StateMode.PURE:
            if data.shape != (dim,):
                raise ValueError(f"Expect statevector of shape ({dim},), got {data.shape}")
            norm = float(np.vdot(data, data).real)
            if abs(norm - 1) > NORM_TOLERANCE:
                raise ValueError(f"Statevector is not normalised: |psi|^2 = {norm}")
        else:
            if data.shape != (dim, dim):
                raise ValueError(f"Expect density matrix of shape ({dim}, {dim}), got {data.shape}")
            tr = np.trace(data)
            if abs(tr - 1) > NORM_TOLERANCE:
                raise ValueError(f"Density matrix trace is {tr}, expect 1")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @staticmethod
    def zeros(n: int, mode: StateMode = StateMode.PURE) -> "QuantumState":
        psi = np.zeros(1 << n, dtype=complex)
        psi[0] = 1
        return QuantumState(n, psi).to_mode(mode)

    @staticmethod
    def from_vector(v: np.ndarray, normalise: bool = False) -> "QuantumState":
        v = np.asarray(v, dtype=complex)
        n = int(round(math.log2(v.shape[0])))
        if normalise:
            v = v / np.linalg.norm(v)
        return QuantumState(n, v)

    @staticmethod
    def from_density(rho: np.ndarray) -> "QuantumState":
        rho = np.asarray(rho, dtype=complex)
        n = int(round(math.log2(rho.shape[0])))
        return QuantumState(n, rho, StateMode.DENSITY)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def is_pure(self) -> bool:
        return self.mode is StateMode.PURE

    def to_density(self) -> "QuantumState":
        if not self.is_pure:
            return self
        return QuantumState(self.n_qubits, np.outer(self.data, self.data.conj()), StateMode.DENSITY)

    def to_mode(self, mode: StateMode) -> "QuantumState":
        return self.to_density() if mode is StateMode.DENSITY else self

    def density_matrix(self) -> np.ndarray:
        return self.to_density().data

    def probabilities(self) -> np.ndarray:
        if self.is_pure:
            return np.abs(self.data) ** 2
        return np.real(np.diag(self.data)).copy()

    def overlap(self, other: "QuantumState") -> complex:
        """<self|other>, pure states only."""
        if not (self.is_pure and other.is_pure):
            raise ValueError("Overlap is only defined between pure states")
        return complex(np.vdot(self.data, other.data))

    def fidelity(self, other: "QuantumState") -> float:
        """Fidelity when at least one side is pure."""
        if self.is_pure and other.is_pure:
            return abs(self.overlap(other)) ** 2
        if self.is_pure:
            return float(np.vdot(self.data, other.data @ self.data).real)
        if other.is_pure:
            return other.fidelity(self)
        raise ValueError("Fidelity between two mixed states is not supported")

    def is_physical(self, tol: float = 1e-9) -> bool:
        if self.is_pure:
            return True
        rho = self.data
        if not np.allclose(rho, rho.conj().T, atol=NORM_TOLERANCE):
            return False
        return bool(np.linalg.eigvalsh(rho).min() >= -tol)


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OneQubit:
    name: str
    qubit: int
    angle: float = 0.0

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)

    def matrix(self) -> np.ndarray:
        return gate_matrix(self.name, self.angle)


@dataclass(frozen=True)
class ControlledOp:
    control: int
    target: int
    base: str = "X"

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.control, self.target)

    def matrix(self) -> np.ndarray:
        u = np.eye(4, dtype=complex)
        u[2:, 2:] = gate_matrix(self.base)
        return u


@dataclass(frozen=True)
class TwoPauliRotation:
    """exp(-i angle P_a P_b / 2)"""

    axis_a: str
    axis_b: str
    qubit_a: int
    qubit_b: int
    angle: float

    def __post_init__(self):
        if self.qubit_a == self.qubit_b:
            raise ValueError("Two-Pauli rotation needs two distinct qubits")

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit_a, self.qubit_b)

    @property
    def name(self) -> str:
        return f"R{self.axis_a}{self.axis_b}".upper()

    def pauli(self, n: int) -> PauliString:
        return PauliString.from_sparse(n, {self.qubit_a: self.axis_a, self.qubit_b: self.axis_b})


@dataclass(frozen=True)
class PauliRotation:
    """exp(-i angle P / 2) for a Hermitian string P."""

    pauli: PauliString
    angle: float

    def __post_init__(self):
        if not self.pauli.is_hermitian:
            raise ValueError(f"Rotation generator must be Hermitian, got {self.pauli}")

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.pauli.support


GateOp = Union[OneQubit, ControlledOp, TwoPauliRotation, PauliRotation]


def _apply_local(data: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Apply a ``2^k x 2^k`` matrix on ``qubits`` along axis 0 of ``data``."""
    k = len(qubits)
    rest = data.shape[1:]
    t = data.reshape([2] * n + list(rest))
    m = matrix.reshape([2] * (2 * k))
    t = np.tensordot(m, t, axes=(list(range(k, 2 * k)), list(qubits)))
    t = np.moveaxis(t, list(range(k)), list(qubits))
    return t.reshape(data.shape)


def _rotate(data: np.ndarray, p: PauliString, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return c * data - 1j * s * p.apply(data)


def _left_action(gate: GateOp, n: int):
    if isinstance(gate, (OneQubit, ControlledOp)):
        m, qq = gate.matrix(), gate.qubits
        return lambda a: _apply_local(a, m, qq, n)
    if isinstance(gate, TwoPauliRotation):
        p = gate.pauli(n)
    else:
        if gate.pauli.n_qubits != n:
            raise ValueError(f"Rotation acts on {gate.pauli.n_qubits} qubits, state has {n}")
        p = gate.pauli
    return lambda a: _rotate(a, p, gate.angle)


def _check_qubits(gate: GateOp, n: int):
    for q in gate.qubits:
        if not 0 <= q < n:
            raise IndexError(f"Qubit {q} is out of range for {n} qubits")


def _conjugate(rho: np.ndarray, left) -> np.ndarray:
    """U rho U^dagger given a function applying U to columns."""
    a = left(rho)
    return left(a.conj().T).conj().T


def apply_gate(state: QuantumState, gate: GateOp) -> QuantumState:
    n = state.n_qubits
    _check_qubits(gate, n)
    left = _left_action(gate, n)
    if state.is_pure:
        return QuantumState(n, left(state.data))
    return QuantumState(n, _conjugate(state.data, left), StateMode.DENSITY)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing channel applied after every two-qubit gate."""

    two_qubit_depolarizing: float = 0.0

    @property
    def is_noiseless(self) -> bool:
        return self.two_qubit_depolarizing == 0


def apply_noisy_gate(state: QuantumState, gate: GateOp, noise: NoiseModel) -> QuantumState:
    """Gate followed by depolarizing noise on its qubits when it is a two-qubit gate."""
    state = apply_gate(state, gate)
    if noise.is_noiseless or len(gate.qubits) != 2:
        return state
    return apply_depolarizing(state.to_density(), gate.qubits, noise.two_qubit_depolarizing)


def apply_circuit(
    state: QuantumState, gates: Iterable[GateOp], noise: Optional[NoiseModel] = None
) -> QuantumState:
    if noise is None or noise.is_noiseless:
        for g in gates:
            state = apply_gate(state, g)
        return state
    state = state.to_density()
    for g in gates:
        state = apply_noisy_gate(state, g, noise)
    return state


def unitary_of(gates: Iterable[GateOp], n: int) -> np.ndarray:
    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        _check_qubits(g, n)
        u = _left_action(g, n)(u)
    return u


# ---------------------------------------------------------------------------
# Hamiltonian evolution and measurement
# ---------------------------------------------------------------------------


def _require_hermitian(op: Operator) -> OperatorSum:
    if isinstance(op, PauliString):
        op = OperatorSum.from_terms(op.n_qubits, [(1, op)])
    if not op.is_hermitian():
        raise ValueError("Operator is not Hermitian")
    return op


@lru_cache(maxsize=128)
def spectrum(h: OperatorSum) -> Tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(to_dense(h))
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def propagator(h: OperatorSum, t: float) -> np.ndarray:
    h = _require_hermitian(h)
    w, v = spectrum(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def evolve_exact(state: QuantumState, h: Operator, t: float) -> QuantumState:
    h = _require_hermitian(h)
    if h.n_qubits != state.n_qubits:
        raise ValueError(f"Hamiltonian acts on {h.n_qubits} qubits, state has {state.n_qubits}")
    u = propagator(h, t)
    if state.is_pure:
        return QuantumState(state.n_qubits, u @ state.data)
    return QuantumState(state.n_qubits, u @ state.data @ u.conj().T, StateMode.DENSITY)


def expectation(state: QuantumState, op: Operator) -> float:
    op = _require_hermitian(op)
    if op.n_qubits != state.n_qubits:
        raise ValueError(f"Operator acts on {op.n_qubits} qubits, state has {state.n_qubits}")
    if state.is_pure:
        return float(np.vdot(state.data, op.apply(state.data)).real)
    return float(np.trace(op.apply(state.data)).real)


def sample_expectation(
    state: QuantumState, op: Operator, shots: int, seed: int, stream: int = 0
) -> float:
    """
    Estimate of <P> from ``shots`` projective measurements of a single
    Hermitian string.

    Outcomes come from ``numpy.random.default_rng([seed, stream])``: the same
    ``(seed, stream)`` pair always yields the same shot record.
    """
    if isinstance(op, OperatorSum):
        if len(op) != 1:
            raise ValueError("Only single-string operators can be sampled, measure term by term")
        (c, p), = op.terms
        if abs(c.imag) > 1e-12:
            raise ValueError("Operator is not Hermitian")
        scale = c.real
    else:
        if not op.is_hermitian:
            raise ValueError("Operator is not Hermitian")
        p, scale = op.strip_phase(), op.phase.real
    if shots < 1:
        raise ValueError(f"Need at least one shot, got {shots}")

    mean = expectation(state, p)
    p_plus = min(1.0, max(0.0, (1 + mean) / 2))
    rng = np.random.default_rng([seed, stream])
    n_plus = int(np.count_nonzero(rng.random(shots) < p_plus))
    return scale * (2 * n_plus / shots - 1)


def apply_depolarizing(state: QuantumState, qubits: Sequence[int], p: float) -> QuantumState:
    """
    rho -> (1 - p) rho + p / 4^k sum_P P rho P over every Pauli on ``qubits``.
    """
    if state.is_pure:
        raise ValueError("Depolarizing channel needs a density matrix state")
    if not 0 <= p <= 1:
        raise ValueError(f"Probability must be in [0, 1], got {p}")
    n = state.n_qubits
    for q in qubits:
        if not 0 <= q < n:
            raise IndexError(f"Qubit {q} is out of range for {n} qubits")
    if p == 0:
        return state

    rho = state.data
    k = len(qubits)
    mixed = np.zeros_like(rho)
    for letters in itertools.product("IXYZ", repeat=k):
        pp = PauliString.from_sparse(n, dict(zip(qubits, letters)))
        mixed += pp.apply(pp.apply(rho).conj().T).conj().T
    out = (1 - p) * rho + (p / 4 ** k) * mixed
    return QuantumState(n, out, StateMode.DENSITY)
