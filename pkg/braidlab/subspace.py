"""
Labelled eigenbases of commuting Pauli sets and effective Hamiltonians on
selected sectors.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, minimum_spanning_tree

from .model import SystemKind, SystemSpec, conserved_names, energy_and_parity_operators, named_conserved
from .pauli import OperatorSum, PauliString, commutes

_log = logging.getLogger(__name__)

Label = Tuple[int, ...]
Selector = Union[Mapping[str, int], Callable[[Dict[str, int]], bool]]

GAUGE_CONVENTION = "largest-amplitude-real-positive"
_SUPPORT_TOL = 1e-9
_TIE_TOL = 1e-9


def _fix_gauge(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    idx = int(np.argmax(mags >= mags.max() - _TIE_TOL))
    return v * (abs(v[idx]) / v[idx])


def _project(block: np.ndarray, p: PauliString, s: int) -> np.ndarray:
    return (block + s * p.apply(block)) / 2


def _reduce(block: np.ndarray, reps: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Keep one column per orbit: projected basis vectors are either zero or
    parallel to another projected basis vector inside their support.
    """
    norms = np.linalg.norm(block, axis=0)
    covered = np.zeros(block.shape[0], dtype=bool)
    keep = []
    for j in np.argsort(reps, kind="stable"):
        if norms[j] < _SUPPORT_TOL or covered[reps[j]]:
            continue
        keep.append(j)
        covered |= np.abs(block[:, j]) > _SUPPORT_TOL
    return block[:, keep], reps[keep]


@dataclass(frozen=True)
class LabeledBasis:
    n_qubits: int
    names: Tuple[str, ...]
    operators: Tuple[PauliString, ...]
    labels: Tuple[Label, ...]
    vectors: np.ndarray
    gauge: str = GAUGE_CONVENTION

    def __len__(self) -> int:
        return len(self.labels)

    def label_dict(self, i: int) -> Dict[str, int]:
        return dict(zip(self.names, self.labels[i]))

    def select(self, selector: Optional[Selector] = None) -> List[int]:
        if selector is None:
            return list(range(len(self)))
        if callable(selector):
            return [i for i in range(len(self)) if selector(self.label_dict(i))]
        for k in selector:
            if k not in self.names:
                raise ValueError(f"Selector refers to unknown operator '{k}'")
        return [
            i
            for i in range(len(self))
            if all(self.label_dict(i)[k] == v for k, v in selector.items())
        ]

    def sector_basis(self, selector: Optional[Selector] = None) -> "LabeledBasis":
        idx = self.select(selector)
        if not idx:
            raise ValueError("Selector picks no states")
        return LabeledBasis(
            self.n_qubits,
            self.names,
            self.operators,
            tuple(self.labels[i] for i in idx),
            self.vectors[:, idx],
            self.gauge,
        )

    def project(self, op: Union[OperatorSum, PauliString]) -> np.ndarray:
        v = self.vectors
        return v.conj().T @ op.apply(v)

    def residual(self) -> float:
        """Worst eigen-equation violation and deviation from orthonormality."""
        v = self.vectors
        worst = float(np.abs(v.conj().T @ v - np.eye(v.shape[1])).max())
        for k, p in enumerate(self.operators):
            s = np.array([lab[k] for lab in self.labels])
            worst = max(worst, float(np.abs(p.apply(v) - v * s).max()))
        return worst


def simultaneous_eigenbasis(
    ops: Sequence[PauliString],
    n_qubits: int,
    names: Optional[Sequence[str]] = None,
    restrict: Optional[Mapping[str, int]] = None,
) -> LabeledBasis:
    """
    Orthonormal eigenbasis of commuting Hermitian strings.

    Sectors are resolved one operator at a time by projecting onto its
    eigenspaces. Labels are ordered with the first free operator varying
    fastest and -1 before +1. ``restrict`` pins some operators to a fixed
    eigenvalue so only that part of the space is built.
    """
    ops = tuple(ops)
    names = tuple(names) if names is not None else tuple(f"P{i}" for i in range(len(ops)))
    if len(names) != len(ops):
        raise ValueError("Need one name per operator")
    for p in ops:
        if p.n_qubits != n_qubits:
            raise ValueError(f"Operator {p} does not act on {n_qubits} qubits")
        if not p.is_hermitian:
            raise ValueError(f"Operator {p} is not Hermitian")
    for (na, a), (nb, b) in itertools.combinations(zip(names, ops), 2):
        if not commutes(a, b):
            raise ValueError(f"{na} and {nb} do not commute")

    restrict = dict(restrict or {})
    for k, v in restrict.items():
        if k not in names:
            raise ValueError(f"Unknown operator '{k}' in restriction")
        if v not in (-1, 1):
            raise ValueError(f"Eigenvalue of {k} must be +1 or -1, got {v}")

    dim = 1 << n_qubits
    block = np.eye(dim, dtype=complex)
    reps = np.arange(dim)
    for name, p in zip(names, ops):
        if name in restrict:
            block, reps = _reduce(_project(block, p, restrict[name]), reps)

    free = [i for i, name in enumerate(names) if name not in restrict]
    leaves: Dict[Label, np.ndarray] = {}

    def split(level: int, blk: np.ndarray, rr: np.ndarray, values: Tuple[int, ...]):
        if blk.shape[1] == 0:
            return
        if level == len(free):
            leaves[values] = blk
            return
        p = ops[free[level]]
        for s in (-1, 1):
            b, r = _reduce(_project(blk, p, s), rr)
            split(level + 1, b, r, values + (s,))

    split(0, block, reps, ())

    vectors: List[np.ndarray] = []
    labels: List[Label] = []
    for combo in itertools.product((-1, 1), repeat=len(free)):
        values = combo[::-1]
        blk = leaves.get(values)
        if blk is None:
            continue
        assigned = dict(restrict)
        assigned.update({names[i]: s for i, s in zip(free, values)})
        label = tuple(assigned[name] for name in names)
        for j in range(blk.shape[1]):
            v = blk[:, j]
            vectors.append(_fix_gauge(v / np.linalg.norm(v)))
            labels.append(label)

    if not vectors:
        raise ValueError("Requested sector is empty")
    return LabeledBasis(n_qubits, names, ops, tuple(labels), np.stack(vectors, axis=1))


@dataclass(frozen=True)
class EffectiveHamiltonian:
    matrix: np.ndarray
    basis_labels: Tuple[Label, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def effective_hamiltonian(
    h: OperatorSum, basis: LabeledBasis, selector: Optional[Selector] = None
) -> EffectiveHamiltonian:
    if not h.is_hermitian():
        raise ValueError("Hamiltonian is not Hermitian")
    idx = basis.select(selector)
    if not idx:
        raise ValueError("Selector picks no states")
    v = basis.vectors[:, idx]
    m = v.conj().T @ h.apply(v)
    m = (m + m.conj().T) / 2
    return EffectiveHamiltonian(m, tuple(basis.labels[i] for i in idx))


def _align_residual(m: np.ndarray, target: np.ndarray, phases: np.ndarray) -> float:
    d = np.exp(1j * phases)
    return float(np.linalg.norm(d.conj()[:, None] * m * d[None, :] - target))


def gauge_align(
    m: Union[EffectiveHamiltonian, np.ndarray], target: np.ndarray, refine_above: float = 1e-8
) -> Tuple[np.ndarray, float]:
    """
    Diagonal unitary ``D`` minimising ``|D^+ M D - target|_F`` and the residual.

    Relative phases are read off a maximum spanning tree of the target's
    non-zero entries, then polished numerically when that is not exact.
    """
    m = m.matrix if isinstance(m, EffectiveHamiltonian) else np.asarray(m)
    target = np.asarray(target)
    if m.shape != target.shape:
        raise ValueError(f"Shape mismatch: {m.shape} vs {target.shape}")
    k = m.shape[0]

    weight = np.abs(target).copy()
    np.fill_diagonal(weight, 0)
    weight[np.abs(m) < _SUPPORT_TOL] = 0
    phases = np.zeros(k)
    if weight.max() > 0:
        # smaller edge weight for larger entries so the minimum tree keeps them
        cost = np.where(weight > 0, weight.max() + 1 - weight, 0)
        tree = minimum_spanning_tree(csr_matrix(np.maximum(cost, cost.T)))
        seen = np.zeros(k, dtype=bool)
        for root in range(k):
            if seen[root]:
                continue
            order, pred = breadth_first_order(tree, root, directed=False)
            for b in order:
                seen[b] = True
                a = pred[b]
                if a < 0:
                    continue
                # e^{-i p_a} M_ab e^{i p_b} = T_ab
                phases[b] = phases[a] + np.angle(target[a, b]) - np.angle(m[a, b])

    residual = _align_residual(m, target, phases)
    if residual > refine_above and k > 1:
        res = minimize(
            lambda p: _align_residual(m, target, np.concatenate([[0.0], p])) ** 2,
            phases[1:] - phases[0],
            method="BFGS",
        )
        candidate = np.concatenate([[0.0], res.x])
        r2 = _align_residual(m, target, candidate)
        if r2 < residual:
            phases, residual = candidate, r2
        _log.debug(f"Gauge alignment refined numerically, residual {residual:.3g}")
    return np.diag(np.exp(1j * phases)), residual


# ---------------------------------------------------------------------------
# Effective Pauli operators and analytic effective Hamiltonians
# ---------------------------------------------------------------------------

PAULI_2x2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def effective_pauli(letters: str) -> np.ndarray:
    """Kronecker product of 2x2 Paulis, first letter is the slowest index."""
    out = np.eye(1, dtype=complex)
    for c in letters:
        out = np.kron(out, PAULI_2x2[c])
    return out


# arm -> basis operators (first varies fastest), pinned operators
_ARM_SECTORS = {
    (SystemKind.FOUR_QUBIT, "left"): (("n", "h"), {"W1": -1, "W2": -1}),
    (SystemKind.TETRAD_TORUS, "left"): (("n", "h"), {"W1": -1, "W2": -1}),
    (SystemKind.TEN_QUBIT, "left"): (
        ("n", "h"),
        {"W1": -1, "W2": -1, "W4": -1, "W5": -1, "W6": -1, "h'": -1, "h_a": -1, "n'": -1},
    ),
    (SystemKind.TEN_QUBIT, "right"): (
        ("n'", "h'"),
        {"W1": -1, "W2": -1, "W4": -1, "W5": -1, "W6": -1, "h": -1, "h_a": -1, "n": -1},
    ),
    (SystemKind.TEN_QUBIT, "middle"): (
        ("n", "n'", "h_a"),
        {"W1": -1, "W2": -1, "W4": -1, "W5": -1, "W6": -1, "h": -1, "h'": -1},
    ),
}

# W operator whose eigenvalue sets the sign of the eta^y term
_CHIRALITY_OPERATOR = {"left": "W1", "right": "W4"}


def labelled_operators(spec: SystemSpec) -> Dict[str, PauliString]:
    ops = dict(energy_and_parity_operators(spec))
    ww = named_conserved(spec)
    ops.update({k: ww[k] for k in conserved_names(spec)})
    return ops


def arm_sector(spec: SystemSpec, arm: str) -> LabeledBasis:
    """
    Sector in which one clock arm moves: integrals of motion at -1, idle
    arms in their low-energy state, labelled by the moving arm's energy and
    parity operators.
    """
    try:
        free, pinned = _ARM_SECTORS[(spec.kind, arm)]
    except KeyError:
        raise ValueError(f"No '{arm}' arm on {spec.kind.value} system") from None
    ops = labelled_operators(spec)
    names = list(free) + list(pinned)
    return simultaneous_eigenbasis([ops[k] for k in names], spec.n_qubits, names, pinned)


def idle_offset(spec: SystemSpec, arm: str) -> float:
    """Energy of the idle arms in their low-energy state."""
    return -sum(a.magnitude for name, a in spec.arms().items() if name != arm)


def analytic_effective(
    spec: SystemSpec, arm: str, chirality: Optional[int] = None
) -> np.ndarray:
    """
    Closed-form effective Hamiltonian of ``arm`` in the ``arm_sector`` basis.

    Left / right arms use ``kron(tau, eta)``, the middle arm
    ``kron(chi, eta', eta)``.
    """
    a = spec.arm(arm)
    s_t, c_t = math.sin(a.polar), math.cos(a.polar)
    s_p, c_p = math.sin(a.azimuth), math.cos(a.azimuth)
    if arm == "middle":
        h = (
            -c_t * effective_pauli("ZII")
            + s_t * c_p * effective_pauli("XIY")
            + s_t * s_p * effective_pauli("YXI")
        )
    else:
        if chirality is None:
            chirality = arm_sector(spec, arm).label_dict(0)[_CHIRALITY_OPERATOR[arm]]
        h = (
            -c_t * effective_pauli("ZI")
            - s_t * c_p * effective_pauli("XX")
            + chirality * s_t * s_p * effective_pauli("XY")
        )
    offset = idle_offset(spec, arm) if spec.kind is SystemKind.TEN_QUBIT else 0.0
    return a.magnitude * h + offset * np.eye(h.shape[0])


def sector_selector(**labels: int) -> Callable[[Dict[str, int]], bool]:
    """
    Label predicate by operator name. Primed names use a trailing ``_p``:
    ``sector_selector(W1=-1, h_p=-1)`` selects ``W1 = -1`` and ``h' = -1``.
    """
    wanted = {k[:-2] + "'" if k.endswith("_p") else k: v for k, v in labels.items()}
    return lambda lab: all(lab.get(k) == v for k, v in wanted.items())
