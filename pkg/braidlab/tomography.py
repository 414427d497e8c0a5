"""
Logical state tomography, Choi matrices by linear inversion and process
fidelity.

Choi matrices use ``J = sum_ij |i><j| (x) L(|i><j|)`` so ``Tr J = d`` and a
perfect gate has process fidelity ``Tr[J_ideal^+ J] / d^2 = 1``.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import sqrtm
from tqdm.auto import tqdm

from .engine import NoiseModel, QuantumState, expectation, sample_expectation
from .model import SystemSpec, logical_basis, logical_operators
from .pauli import PauliString, multiply
from .protocol import TrotterPlan, execute_braid, logical_vector
from .subspace import effective_pauli

_log = logging.getLogger(__name__)

LOGICAL_INPUT_LABELS = ("0", "1", "+", "i+")
_CONDITION_LIMIT = 1e10

Channel = Callable[[np.ndarray], np.ndarray]


class SingularInputsError(ValueError):
    pass


@dataclass(frozen=True)
class LogicalDensityMatrix:
    matrix: np.ndarray
    min_eigenvalue: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def negative(self) -> bool:
        return self.min_eigenvalue < 0


@dataclass(frozen=True)
class ChoiMatrix:
    d: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.d * self.d, self.d * self.d):
            raise ValueError(f"Choi matrix of a d={self.d} channel must be {self.d ** 2} x {self.d ** 2}")

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_residual(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def min_eigenvalue(self) -> float:
        h = (self.matrix + self.matrix.conj().T) / 2
        return float(np.linalg.eigvalsh(h).min())

    def is_physical(self, tol: float = 1e-6) -> bool:
        return self.hermiticity_residual() < tol and self.min_eigenvalue() >= -tol


def _n_logical(d: int) -> int:
    n = {2: 1, 4: 2}.get(d)
    if n is None:
        raise ValueError(f"Logical dimension must be 2 or 4, got {d}")
    return n


def input_labels(d: int) -> List[Tuple[str, ...]]:
    """Input label products, logical qubit 0 varying slowest."""
    return list(itertools.product(LOGICAL_INPUT_LABELS, repeat=_n_logical(d)))


def input_states(d: int) -> List[np.ndarray]:
    out = []
    for labels in input_labels(d):
        v = logical_vector(labels)
        out.append(np.outer(v, v.conj()))
    return out


def _vec(m: np.ndarray) -> np.ndarray:
    return m.reshape(-1, order="F")


def choi_of_unitary(u: np.ndarray) -> ChoiMatrix:
    u = np.asarray(u, dtype=complex)
    omega = u.T.reshape(-1)
    return ChoiMatrix(u.shape[0], np.outer(omega, omega.conj()))


def choi_from_inputs(
    channel: Channel, d: int, inputs: Optional[Sequence[np.ndarray]] = None
) -> ChoiMatrix:
    """Linear inversion of ``channel`` measured on the fixed input set."""
    inputs = list(inputs) if inputs is not None else input_states(d)
    return choi_from_outputs(inputs, [channel(r) for r in inputs], d)


def choi_from_outputs(inputs: Sequence[np.ndarray], outputs: Sequence[np.ndarray], d: int) -> ChoiMatrix:
    if len(inputs) != d * d:
        raise SingularInputsError(f"Need {d * d} input states, got {len(inputs)}")
    ins = np.stack([_vec(r) for r in inputs], axis=1)
    cond = np.linalg.cond(ins)
    if not np.isfinite(cond) or cond > _CONDITION_LIMIT:
        raise SingularInputsError(f"Input states are not a basis (condition number {cond:.3g})")
    outs = np.stack([_vec(np.asarray(r)) for r in outputs], axis=1)
    superop = outs @ np.linalg.inv(ins)

    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            block = superop[:, i + j * d].reshape(d, d, order="F")
            choi[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
    return ChoiMatrix(d, choi)


def _as_choi(m: Union[ChoiMatrix, np.ndarray]) -> ChoiMatrix:
    if isinstance(m, ChoiMatrix):
        return m
    m = np.asarray(m, dtype=complex)
    return ChoiMatrix(int(round(np.sqrt(m.shape[0]))), m)


def process_fidelity(ideal: Union[ChoiMatrix, np.ndarray], actual: Union[ChoiMatrix, np.ndarray]) -> float:
    ideal, actual = _as_choi(ideal), _as_choi(actual)
    if ideal.d != actual.d:
        raise ValueError(f"Dimension mismatch: {ideal.d} vs {actual.d}")
    return float(np.trace(ideal.matrix.conj().T @ actual.matrix).real) / ideal.d ** 2


def positivity_projection(choi: ChoiMatrix) -> Tuple[ChoiMatrix, bool]:
    """Clip negative eigenvalues and restore ``Tr J = d``."""
    h = (choi.matrix + choi.matrix.conj().T) / 2
    w, v = np.linalg.eigh(h)
    clipped = bool(w.min() < 0)
    if not clipped:
        return ChoiMatrix(choi.d, h), False
    _log.debug(f"Clipping Choi eigenvalues, smallest is {w.min():.3g}")
    w = np.clip(w, 0, None)
    m = (v * w) @ v.conj().T
    m *= choi.d / np.trace(m).real
    return ChoiMatrix(choi.d, m), True


def state_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    w, v = np.linalg.eigh(rho)
    if w[-1] > 1 - 1e-9:
        psi = v[:, -1]
        return float(np.vdot(psi, sigma @ psi).real)
    s = sqrtm(rho)
    return float(np.real(np.trace(sqrtm(s @ sigma @ s))) ** 2)


# ---------------------------------------------------------------------------
# Logical state tomography
# ---------------------------------------------------------------------------


def logical_pauli_frame(
    ops: Sequence[Dict[str, PauliString]]
) -> List[Tuple[str, Optional[PauliString], np.ndarray]]:
    """``(letters, physical string, logical matrix)`` for every logical Pauli product."""
    frame = []
    for letters in itertools.product("IXYZ", repeat=len(ops)):
        phys = None
        for qubit_ops, c in zip(ops, letters):
            if c == "I":
                continue
            phys = qubit_ops[c] if phys is None else multiply(phys, qubit_ops[c])
        frame.append(("".join(letters), phys, effective_pauli("".join(letters))))
    return frame


def state_tomography(
    state: QuantumState,
    ops: Sequence[Dict[str, PauliString]],
    shots: Optional[int] = None,
    seed: int = 0,
    stream_offset: int = 0,
) -> LogicalDensityMatrix:
    """
    ``rho = (1/d) sum_P <P> sigma_P`` over the logical Pauli frame. With
    ``shots`` every expectation is sampled from its own stream
    ``stream_offset + index``.
    """
    frame = logical_pauli_frame(ops)
    d = 1 << len(ops)
    rho = np.zeros((d, d), dtype=complex)
    for k, (_, phys, sigma) in enumerate(frame):
        if phys is None:
            value = 1.0
        elif shots is None:
            value = expectation(state, phys)
        else:
            value = sample_expectation(state, phys, shots, seed, stream_offset + k)
        rho += value * sigma
    rho /= d
    rho = (rho + rho.conj().T) / 2
    rho /= np.trace(rho).real
    return LogicalDensityMatrix(rho, float(np.linalg.eigvalsh(rho).min()))


def _embed(rho_logical: np.ndarray, basis: np.ndarray) -> QuantumState:
    w, v = np.linalg.eigh(rho_logical)
    if w[-1] > 1 - 1e-9:
        return QuantumState.from_vector(basis @ v[:, -1], normalise=True)
    return QuantumState.from_density(basis @ rho_logical @ basis.conj().T)


def channel_from_plan(
    plan: TrotterPlan,
    spec: SystemSpec,
    noise: Optional[NoiseModel] = None,
    shots: Optional[int] = None,
    seed: int = 0,
) -> Channel:
    """
    Logical channel of a braid: prepare the input on the code space, run the
    plan, tomograph the output.
    """
    basis = logical_basis(spec)
    ops = logical_operators(spec)
    calls = [0]

    def channel(rho: np.ndarray) -> np.ndarray:
        out = execute_braid(plan, _embed(rho, basis), noise)
        offset = calls[0] * 4 ** len(ops)
        calls[0] += 1
        return state_tomography(out, ops, shots, seed, offset).matrix

    return channel


@dataclass(frozen=True)
class ProcessReport:
    choi: ChoiMatrix
    ideal: ChoiMatrix
    process_fidelity: float
    state_fidelities: Tuple[Tuple[Tuple[str, ...], float], ...]
    clipped: bool


def process_tomography(
    plan: TrotterPlan,
    spec: SystemSpec,
    ideal: np.ndarray,
    noise: Optional[NoiseModel] = None,
    shots: Optional[int] = None,
    seed: int = 0,
    project_positive: bool = False,
    progress: bool = False,
) -> ProcessReport:
    d = 1 << spec.n_logical
    if ideal.shape != (d, d):
        raise ValueError(f"Ideal gate must be {d} x {d}, got {ideal.shape}")
    channel = channel_from_plan(plan, spec, noise, shots, seed)
    labels = input_labels(d)
    inputs = input_states(d)

    outputs = [channel(r) for r in tqdm(inputs, desc="inputs", disable=not progress)]
    choi = choi_from_outputs(inputs, outputs, d)
    clipped = False
    if project_positive:
        choi, clipped = positivity_projection(choi)
    elif not choi.is_physical():
        _log.warning(f"Reconstructed Choi matrix has eigenvalue {choi.min_eigenvalue():.3g}")

    target = choi_of_unitary(ideal)
    fids = tuple(
        (lab, state_fidelity(ideal @ r @ ideal.conj().T, out))
        for lab, r, out in zip(labels, inputs, outputs)
    )
    return ProcessReport(choi, target, process_fidelity(target, choi), fids, clipped)
