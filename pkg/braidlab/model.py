"""
Spin Hamiltonians of the Y-junction systems, their integrals of motion and
logical operators.

Qubits ``0..5`` are the unprimed sites, the primed sites ``0'..3'`` map onto
``6..9``.
"""
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .pauli import OperatorSum, PauliString, multiply

ARM_NAMES = ("left", "right", "middle")
COMPONENTS = ("x", "y", "z")

# arm -> component -> (qubit pair, Pauli letter on both qubits)
ARM_PAIRS: Dict[str, Dict[str, Tuple[Tuple[int, int], str]]] = {
    "left": {"z": ((0, 1), "Z"), "y": ((0, 2), "Y"), "x": ((0, 3), "X")},
    "right": {"z": ((6, 7), "Z"), "y": ((6, 8), "Y"), "x": ((6, 9), "X")},
    "middle": {"z": ((4, 5), "Z"), "y": ((4, 9), "Y"), "x": ((2, 4), "X")},
}

# extra couplings that keep every integral of motion intact
BAR_TERMS: Dict[str, Dict[str, Tuple[Tuple[int, int], str]]] = {
    "tetrad_torus": {"z": ((2, 3), "Z"), "y": ((1, 3), "Y"), "x": ((1, 2), "X")},
    "ten_qubit": {
        "z": ((2, 3), "Z"),
        "y": ((1, 3), "Y"),
        "x": ((1, 5), "X"),
        "z'": ((8, 9), "Z"),
        "y'": ((7, 5), "Y"),
        "x'": ((7, 8), "X"),
    },
}

_W_LABELS_4 = {"W1": "ZIXY", "W2": "YXIZ", "W3": "XYZI"}
_W_LABELS_10 = {
    "W1": "ZIXYIIIIII",
    "W2": "YXIZIIIIII",
    "W3": "XYZIIIIIII",
    "W4": "IIIIIIZIXY",
    "W5": "IIIIIIXYZI",
    "W6": "XYZIYYIIII",
    "W7": "IIIIXXYXIZ",
}
_CONSERVED_10 = ("W1", "W2", "W4", "W5", "W6", "W7")

_PARITY_PAIRS = {
    "h": (0, 1),
    "n": (2, 3),
    "h'": (6, 7),
    "n'": (8, 9),
    "h_a": (4, 5),
}


class SystemKind(Enum):
    FOUR_QUBIT = "four_qubit"
    TEN_QUBIT = "ten_qubit"
    TETRAD_TORUS = "tetrad_torus"


@dataclass(frozen=True)
class ClockArm:
    magnitude: float = 1.0
    polar: float = 0.0
    azimuth: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError(f"Clock arm magnitude must be >= 0, got {self.magnitude}")
        if not -1e-12 <= self.polar <= math.pi + 1e-12:
            raise ValueError(f"Polar angle must lie in [0, pi], got {self.polar}")
        object.__setattr__(self, "azimuth", float(self.azimuth) % (2 * math.pi))

    @staticmethod
    def from_cartesian(v: Sequence[float]) -> "ClockArm":
        x, y, z = (float(c) for c in v)
        m = math.sqrt(x * x + y * y + z * z)
        if m == 0:
            return ClockArm(0.0)
        return ClockArm(m, math.acos(max(-1.0, min(1.0, z / m))), math.atan2(y, x))

    @property
    def idle(self) -> bool:
        return abs(self.polar) < 1e-12

    def unit(self) -> np.ndarray:
        st = math.sin(self.polar)
        return np.array(
            [st * math.cos(self.azimuth), st * math.sin(self.azimuth), math.cos(self.polar)]
        )

    def cartesian(self) -> np.ndarray:
        """(x, y, z) couplings."""
        return self.magnitude * self.unit()

    def moved(self, polar: float, azimuth: float) -> "ClockArm":
        return ClockArm(self.magnitude, polar, azimuth)


@dataclass(frozen=True)
class SystemSpec:
    kind: SystemKind
    left: ClockArm = field(default_factory=ClockArm)
    right: Optional[ClockArm] = None
    middle: Optional[ClockArm] = None
    bars: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):
        ten = self.kind is SystemKind.TEN_QUBIT
        if ten and (self.right is None or self.middle is None):
            raise ValueError("Ten-qubit system needs left, right and middle arms")
        if not ten and (self.right is not None or self.middle is not None):
            raise ValueError(f"{self.kind.value} system has only the left arm")

        allowed = BAR_TERMS.get(self.kind.value, {})
        for name, _ in self.bars:
            if name not in allowed:
                raise ValueError(f"Unknown coupling '{name}' for {self.kind.value} system")

    @staticmethod
    def four_qubit(arm: Optional[ClockArm] = None) -> "SystemSpec":
        return SystemSpec(SystemKind.FOUR_QUBIT, left=arm or ClockArm())

    @staticmethod
    def tetrad_torus(
        arm: Optional[ClockArm] = None, bars: Optional[Mapping[str, float]] = None
    ) -> "SystemSpec":
        return SystemSpec(
            SystemKind.TETRAD_TORUS,
            left=arm or ClockArm(),
            bars=tuple(sorted((bars or {}).items())),
        )

    @staticmethod
    def ten_qubit(
        left: Optional[ClockArm] = None,
        right: Optional[ClockArm] = None,
        middle: Optional[ClockArm] = None,
        bars: Optional[Mapping[str, float]] = None,
    ) -> "SystemSpec":
        return SystemSpec(
            SystemKind.TEN_QUBIT,
            left=left or ClockArm(),
            right=right or ClockArm(),
            middle=middle or ClockArm(),
            bars=tuple(sorted((bars or {}).items())),
        )

    @property
    def n_qubits(self) -> int:
        return 10 if self.kind is SystemKind.TEN_QUBIT else 4

    @property
    def n_logical(self) -> int:
        return 2 if self.kind is SystemKind.TEN_QUBIT else 1

    def arms(self) -> Dict[str, ClockArm]:
        out = {"left": self.left}
        if self.right is not None:
            out["right"] = self.right
        if self.middle is not None:
            out["middle"] = self.middle
        return out

    def arm(self, name: str) -> ClockArm:
        try:
            return self.arms()[name]
        except KeyError:
            raise ValueError(f"No '{name}' arm in {self.kind.value} system") from None

    def with_arm(self, name: str, arm: ClockArm) -> "SystemSpec":
        self.arm(name)
        return replace(self, **{name: arm})

    def bar(self, name: str) -> float:
        return dict(self.bars).get(name, 0.0)

    def idle(self) -> bool:
        return all(a.idle for a in self.arms().values())


def pair_term(n: int, pair: Tuple[int, int], letter: str) -> PauliString:
    i, j = pair
    return PauliString.from_sparse(n, {i: letter, j: letter})


def arm_terms(n: int, arm_name: str, arm: ClockArm) -> List[Tuple[float, PauliString]]:
    coupling = dict(zip(COMPONENTS, arm.cartesian()))
    return [
        (coupling[c], pair_term(n, pair, letter))
        for c, (pair, letter) in ARM_PAIRS[arm_name].items()
    ]


def hamiltonian(spec: SystemSpec) -> OperatorSum:
    n = spec.n_qubits
    terms: List[Tuple[float, PauliString]] = []
    for name, arm in spec.arms().items():
        terms.extend(arm_terms(n, name, arm))
    for name, value in spec.bars:
        pair, letter = BAR_TERMS[spec.kind.value][name]
        terms.append((value, pair_term(n, pair, letter)))
    return OperatorSum.from_terms(n, terms)


def named_conserved(spec: SystemSpec) -> Dict[str, PauliString]:
    """All W operators defined on the system, including W3 for ten qubits."""
    if spec.kind is SystemKind.TEN_QUBIT:
        labels = _W_LABELS_10
    else:
        labels = _W_LABELS_4
    return {k: PauliString.from_label(v) for k, v in labels.items()}


def conserved_set(spec: SystemSpec) -> List[PauliString]:
    ww = named_conserved(spec)
    if spec.kind is SystemKind.TEN_QUBIT:
        return [ww[k] for k in _CONSERVED_10]
    return list(ww.values())


def conserved_names(spec: SystemSpec) -> Tuple[str, ...]:
    if spec.kind is SystemKind.TEN_QUBIT:
        return _CONSERVED_10
    return tuple(_W_LABELS_4)


def energy_and_parity_operators(spec: SystemSpec) -> Dict[str, PauliString]:
    n = spec.n_qubits
    names = ("h", "n") if n == 4 else tuple(_PARITY_PAIRS)
    return {k: pair_term(n, _PARITY_PAIRS[k], "Z") for k in names}


_CODE_STABILIZERS_4 = ("W1", "W2", "h")
_CODE_STABILIZERS_10 = ("W1", "W2", "W4", "W5", "W6", "h", "h_a", "h'")


def code_stabilizers(spec: SystemSpec) -> Dict[str, PauliString]:
    """Operators equal to -1 on the whole code space. W3 on four qubits flips with logical X."""
    ops = dict(energy_and_parity_operators(spec))
    ops.update(named_conserved(spec))
    names = _CODE_STABILIZERS_10 if spec.kind is SystemKind.TEN_QUBIT else _CODE_STABILIZERS_4
    return {k: ops[k] for k in names}


def dependency_product(spec: SystemSpec) -> PauliString:
    """
    W2 W5 W6 h n h_a h' n', which equals W7 up to a phase on ten qubits.
    """
    if spec.kind is not SystemKind.TEN_QUBIT:
        raise ValueError("Dependency relation only exists on the ten-qubit system")
    ww = named_conserved(spec)
    ops = energy_and_parity_operators(spec)
    out = ww["W2"]
    for p in (ww["W5"], ww["W6"], ops["h"], ops["n"], ops["h_a"], ops["h'"], ops["n'"]):
        out = multiply(out, p)
    return out


def dependency_phase(spec: SystemSpec) -> complex:
    """Phase ``c`` with ``dependency_product(spec) = c W7``."""
    prod = dependency_product(spec)
    w7 = named_conserved(spec)["W7"]
    if (prod.x, prod.z) != (w7.x, w7.z):
        raise ValueError("Dependency product is not proportional to W7")
    return prod.phase / w7.phase


# ---------------------------------------------------------------------------
# Code states and logical operators
# ---------------------------------------------------------------------------

_S2 = 1 / math.sqrt(2)

# qubit 0 leftmost
_ZERO_4 = {"0101": 0.5, "1010": 0.5, "0110": 0.5j, "1001": 0.5j}
_ONE_4 = {"0100": 0.5, "1011": 0.5, "0111": -0.5j, "1000": -0.5j}
_ONE_4_PRIMED = {"1000": 0.5, "0111": -0.5, "0100": -0.5j, "1011": 0.5j}
_PSI_PLUS = {"01": _S2, "10": _S2}
_PSI_MINUS = {"01": _S2, "10": -_S2}

# logical qubit -> (Z candidate, X candidates), phases fixed against code states
_LOGICAL_CANDIDATES = {
    "q0_4": ("IIZZ", ("IIYZ", "IIXI")),
    "q0_10": ("IIZZIIIIII", ("IIXIIZIIII",)),
    "q1_10": ("IIIIIIIIZZ", ("IIIIIIIZXI",)),
}


def ket(amplitudes: Mapping[str, complex]) -> np.ndarray:
    n = len(next(iter(amplitudes)))
    out = np.zeros(1 << n, dtype=complex)
    for bits, a in amplitudes.items():
        out[int(bits, 2)] += a
    return out


def code_states(spec: SystemSpec) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    ``(|0>_L, |1>_L)`` for every logical qubit, as physical vectors on that
    qubit's own register (4 qubits, or 6 + 4 for the ten-qubit system).
    """
    zero, one = ket(_ZERO_4), ket(_ONE_4)
    if spec.kind is not SystemKind.TEN_QUBIT:
        return [(zero, one)]
    q0 = (np.kron(zero, ket(_PSI_PLUS)), -1j * np.kron(one, ket(_PSI_MINUS)))
    q1 = (zero.copy(), ket(_ONE_4_PRIMED))
    return [q0, q1]


def logical_basis(spec: SystemSpec) -> np.ndarray:
    """
    Physical vectors of the computational logical basis as columns, logical
    qubit 0 is the most significant index.
    """
    states = code_states(spec)
    if len(states) == 1:
        return np.stack(states[0], axis=1)
    (a0, a1), (b0, b1) = states
    cols = [np.kron(a, b) for a in (a0, a1) for b in (b0, b1)]
    return np.stack(cols, axis=1)


def code_projector(spec: SystemSpec) -> np.ndarray:
    c = logical_basis(spec)
    return c @ c.conj().T


def _fix_phases(
    z_label: str, x_labels: Sequence[str], zero: np.ndarray, one: np.ndarray, tol: float = 1e-9
) -> Dict[str, PauliString]:
    z = PauliString.from_label(z_label)
    zz = np.vdot(zero, z.apply(zero))
    if abs(abs(zz) - 1) > tol:
        raise ValueError(f"{z_label} does not act as logical Z")
    if zz.real < 0:
        z = -z

    for label in x_labels:
        x = PauliString.from_label(label)
        amp = np.vdot(one, x.apply(zero))
        if abs(abs(amp) - 1) < tol and abs(amp.imag) < tol:
            if amp.real < 0:
                x = -x
            break
    else:
        raise ValueError(f"No logical X with real matrix element among {x_labels}")

    y = multiply(x, z).with_phase(1)
    return {"X": x, "Y": y, "Z": z}


def logical_operators(spec: SystemSpec) -> List[Dict[str, PauliString]]:
    """
    ``[{X, Y, Z}, ...]`` per logical qubit, Hermitian, with ``Z|0> = |0>``,
    ``X|0> = |1>`` and ``X Y = i Z``.
    """
    if spec.kind is not SystemKind.TEN_QUBIT:
        zero, one = code_states(spec)[0]
        z, xs = _LOGICAL_CANDIDATES["q0_4"]
        return [_fix_phases(z, xs, zero, one)]

    # candidates act on all ten qubits, test them with the other qubit in |0>
    (a0, a1), (b0, b1) = code_states(spec)
    trials = {
        "q0_10": (np.kron(a0, b0), np.kron(a1, b0)),
        "q1_10": (np.kron(a0, b0), np.kron(a0, b1)),
    }
    out = []
    for key, (zero, one) in trials.items():
        z, xs = _LOGICAL_CANDIDATES[key]
        out.append(_fix_phases(z, xs, zero, one))
    return out
