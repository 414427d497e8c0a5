"""
Braiding protocol: clock-face loops, their Trotter circuits, logical state
preparation and the logical gate a circuit realizes.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm, polar

from .engine import (
    ControlledOp,
    GateOp,
    NoiseModel,
    OneQubit,
    PauliRotation,
    QuantumState,
    TwoPauliRotation,
    apply_circuit,
    evolve_exact,
)
from .holonomy import ORIENTATION, ParamPath, Segment
from .model import (
    ARM_PAIRS,
    ClockArm,
    SystemKind,
    SystemSpec,
    arm_terms,
    hamiltonian,
    logical_basis,
    logical_operators,
)
from .pauli import OperatorSum, PauliString

_log = logging.getLogger(__name__)

HALF_PI = math.pi / 2
_ZERO_ANGLE = 1e-12
_RATIO_SLACK = 1e-9
LEAKAGE_LIMIT = 0.5

LOGICAL_LABELS = ("0", "1", "+", "i+")


class LeakageError(RuntimeError):
    pass


def clock_path(target_phi: float, steps_per_segment=100, arm: str = "left") -> ParamPath:
    """
    North pole -> equator -> along the equator by ``target_phi`` -> north pole.

    ``target_phi = 0`` leaves out the equator leg.
    """
    if abs(target_phi) > 2 * math.pi + 1e-12:
        raise ValueError(f"Loop azimuth must satisfy |phi| <= 2 pi, got {target_phi}")
    out = Segment((0.0, 0.0), (HALF_PI, 0.0))
    back = Segment((HALF_PI, target_phi), (0.0, target_phi))
    if target_phi == 0:
        return ParamPath((out, back), steps_per_segment, arm)
    along = Segment((HALF_PI, 0.0), (HALF_PI, target_phi))
    return ParamPath((out, along, back), steps_per_segment, arm)


# ---------------------------------------------------------------------------
# Trotter plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrotterSegment:
    start: Tuple[float, float]
    end: Tuple[float, float]
    n_steps: int
    points: Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class TrotterPlan:
    n_qubits: int
    arm: Optional[str]
    delta_tilde: float
    n_equator: int
    delta_theta: float
    segments: Tuple[TrotterSegment, ...]
    gates: Tuple[GateOp, ...]
    rounded: bool = False
    target_phi: float = 0.0

    @staticmethod
    def empty(n_qubits: int) -> "TrotterPlan":
        return TrotterPlan(n_qubits, None, 0.0, 0, 0.0, (), ())

    @property
    def n_total(self) -> int:
        return sum(s.n_steps for s in self.segments)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def step_counts(self) -> Tuple[int, ...]:
        return tuple(s.n_steps for s in self.segments)

    def to_dict(self) -> Dict:
        return {
            "n_qubits": self.n_qubits,
            "arm": self.arm,
            "delta_tilde": self.delta_tilde,
            "n_equator": self.n_equator,
            "delta_theta": self.delta_theta,
            "target_phi": self.target_phi,
            "rounded": self.rounded,
            "steps": list(self.step_counts()),
            "gates": [[g.name, g.qubit_a, g.qubit_b, g.angle] for g in self.gates],
        }


def _reference_span(path: ParamPath) -> float:
    for seg in path.segments:
        (a0, b0), (a1, b1) = seg.start, seg.end
        if abs(a0 - HALF_PI) < 1e-12 and abs(a1 - HALF_PI) < 1e-12 and b0 != b1:
            return seg.span()
    return max(seg.span() for seg in path.segments)


def step_gates(n_qubits: int, arm: str, delta_tilde: float, point: Tuple[float, float]) -> List[TwoPauliRotation]:
    """One Trotter step: Z pair, then Y pair, then X pair."""
    unit = dict(zip(("x", "y", "z"), ClockArm(1.0, *point).unit()))
    out = []
    for c in ("z", "y", "x"):
        angle = delta_tilde * unit[c]
        if abs(angle) < _ZERO_ANGLE * delta_tilde:
            continue
        (i, j), letter = ARM_PAIRS[arm][c]
        if max(i, j) >= n_qubits:
            raise ValueError(f"Arm '{arm}' does not fit on {n_qubits} qubits")
        out.append(TwoPauliRotation(letter, letter, i, j, angle))
    return out


def trotterize(
    path: ParamPath,
    delta_tilde: float,
    n_equator: int,
    arm: Optional[str] = None,
    n_qubits: Optional[int] = None,
) -> TrotterPlan:
    """
    Gate schedule of a clock-arm loop with a common angle step.

    The step is ``span(equator leg) / n_equator``; every other leg takes
    ``ceil(span / step)`` steps and lands on its end point.
    """
    if delta_tilde <= 0:
        raise ValueError(f"Exchange constant must be positive, got {delta_tilde}")
    if n_equator < 1:
        raise ValueError(f"Need at least one equator step, got {n_equator}")
    arm = arm or path.arm
    if n_qubits is None:
        n_qubits = 4 if arm == "left" else 10

    step = _reference_span(path) / n_equator
    segments = []
    gates: List[GateOp] = []
    rounded = False
    for seg in path.segments:
        ratio = seg.span() / step if step > 0 else 0.0
        n = int(math.ceil(ratio - _RATIO_SLACK))
        if n < 1:
            continue
        if abs(ratio - round(ratio)) > _RATIO_SLACK:
            rounded = True
        points = tuple(seg.point(k / n) for k in range(1, n + 1))
        for p in points:
            gates.extend(step_gates(n_qubits, arm, delta_tilde, p))
        segments.append(TrotterSegment(seg.start, seg.end, n, points))

    if rounded:
        _log.info(f"Segment step counts rounded up: {[s.n_steps for s in segments]}")
    return TrotterPlan(
        n_qubits,
        arm,
        delta_tilde,
        n_equator,
        step,
        tuple(segments),
        tuple(gates),
        rounded,
        path.solid_angle(),
    )


def evolve_slices(plan: TrotterPlan, state: QuantumState) -> QuantumState:
    """Exact evolution over the same time slices the plan Trotterizes."""
    if plan.n_qubits != state.n_qubits:
        raise ValueError(f"Plan acts on {plan.n_qubits} qubits, state has {state.n_qubits}")
    for seg in plan.segments:
        for p in seg.points:
            h = OperatorSum.from_terms(plan.n_qubits, arm_terms(plan.n_qubits, plan.arm, ClockArm(1.0, *p)))
            state = evolve_exact(state, h, plan.delta_tilde / 2)
    return state


def adiabatic_evolution(
    spec: SystemSpec,
    arm: str,
    path: ParamPath,
    total_time: float,
    slices: int,
    state: QuantumState,
) -> QuantumState:
    """
    Piecewise constant evolution under the full Hamiltonian, ``slices``
    midpoint samples per path segment and equal time per segment.
    """
    if slices < 1:
        raise ValueError(f"Need at least one slice, got {slices}")
    base = spec.arm(arm)
    dt = total_time / (len(path.segments) * slices)
    for seg in path.segments:
        for k in range(slices):
            a, b = seg.point((k + 0.5) / slices)
            state = evolve_exact(state, hamiltonian(spec.with_arm(arm, base.moved(a, b))), dt)
    return state


# ---------------------------------------------------------------------------
# Logical states
# ---------------------------------------------------------------------------


class PrepMethod(Enum):
    EXPLICIT = "explicit"
    CIRCUIT = "circuit"


@dataclass(frozen=True)
class LogicalStatePrep:
    labels: Tuple[str, ...]
    method: PrepMethod = PrepMethod.EXPLICIT

    def __post_init__(self):
        for lab in self.labels:
            if lab not in LOGICAL_LABELS:
                raise ValueError(f"Unknown logical state '{lab}', expect one of {LOGICAL_LABELS}")


_S2 = 1 / math.sqrt(2)
_LOGICAL_VECTORS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([_S2, _S2], dtype=complex),
    "i+": np.array([_S2, 1j * _S2], dtype=complex),
}


def zero_circuit(offset: int = 0) -> List[GateOp]:
    """Prepares the four-qubit |0>_L on qubits ``offset .. offset + 3``."""
    q = [offset + k for k in range(4)]
    return [
        OneQubit("X", q[0]),
        OneQubit("RY", q[1], -HALF_PI),
        OneQubit("RY", q[2], HALF_PI),
        ControlledOp(q[1], q[0], "Y"),
        ControlledOp(q[2], q[0]),
        ControlledOp(q[2], q[1]),
        ControlledOp(q[2], q[3]),
        OneQubit("X", q[2]),
    ]


def one_circuit(offset: int = 0) -> List[GateOp]:
    """Prepares the four-qubit |1>_L on qubits ``offset .. offset + 3``."""
    q = [offset + k for k in range(4)]
    return [
        OneQubit("RX", q[0], HALF_PI),
        OneQubit("X", q[1]),
        OneQubit("H", q[2]),
        ControlledOp(q[0], q[3]),
        ControlledOp(q[2], q[0]),
        ControlledOp(q[0], q[1]),
        ControlledOp(q[0], q[3]),
    ]


def _pair_circuit(a: int, b: int) -> List[GateOp]:
    """(|01> + |10>) / sqrt(2) on qubits a, b."""
    return [OneQubit("H", a), ControlledOp(a, b), OneQubit("X", b)]


def _label_rotation(ops: Dict[str, PauliString], label: str) -> List[GateOp]:
    if label == "0":
        return []
    if label == "1":
        return [PauliRotation(ops["X"], math.pi)]
    if label == "+":
        return [PauliRotation(ops["Y"], HALF_PI)]
    return [PauliRotation(ops["X"], -HALF_PI)]


def initialization_circuit(spec: SystemSpec, labels: Sequence[str]) -> List[GateOp]:
    """
    Gate list preparing ``labels`` from the all-zero state. A four-qubit
    |1>_L uses its own circuit, every other label is rotated out of |0>_L.
    """
    prep = LogicalStatePrep(tuple(labels), PrepMethod.CIRCUIT)
    if len(prep.labels) != spec.n_logical:
        raise ValueError(f"Need {spec.n_logical} labels, got {len(prep.labels)}")
    if spec.kind is not SystemKind.TEN_QUBIT:
        if prep.labels[0] == "1":
            return one_circuit()
        return zero_circuit() + _label_rotation(logical_operators(spec)[0], prep.labels[0])

    gates = zero_circuit(0) + _pair_circuit(4, 5) + zero_circuit(6)
    for ops, lab in zip(logical_operators(spec), prep.labels):
        gates.extend(_label_rotation(ops, lab))
    return gates


def _parse_labels(labels: Union[str, Sequence[str]]) -> Tuple[str, ...]:
    if isinstance(labels, str):
        return tuple(s.strip() for s in labels.split(","))
    return tuple(labels)


def logical_vector(labels: Sequence[str]) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for lab in LogicalStatePrep(tuple(labels)).labels:
        out = np.kron(out, _LOGICAL_VECTORS[lab])
    return out


def prepare_logical(
    labels: Union[str, Sequence[str]],
    spec: SystemSpec,
    method: Union[PrepMethod, str] = PrepMethod.EXPLICIT,
) -> QuantumState:
    labels = _parse_labels(labels)
    method = PrepMethod(method)
    if len(labels) != spec.n_logical:
        raise ValueError(f"Need {spec.n_logical} labels, got {len(labels)}")
    if method is PrepMethod.CIRCUIT:
        return apply_circuit(QuantumState.zeros(spec.n_qubits), initialization_circuit(spec, labels))
    return QuantumState.from_vector(logical_basis(spec) @ logical_vector(labels))


@dataclass(frozen=True)
class LogicalFrame:
    basis: np.ndarray
    operators: Tuple[Dict[str, PauliString], ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def logical_frame(spec: SystemSpec) -> LogicalFrame:
    return LogicalFrame(logical_basis(spec), tuple(logical_operators(spec)))


# ---------------------------------------------------------------------------
# Execution and gate extraction
# ---------------------------------------------------------------------------


def execute_braid(
    plan: TrotterPlan, state: QuantumState, noise: Optional[NoiseModel] = None
) -> QuantumState:
    if plan.n_qubits != state.n_qubits:
        raise ValueError(f"Plan acts on {plan.n_qubits} qubits, state has {state.n_qubits}")
    return apply_circuit(state, plan.gates, noise)


@dataclass(frozen=True)
class LogicalGate:
    unitary: np.ndarray
    raw: np.ndarray
    leakage: float


def extract_logical_gate(plan: TrotterPlan, spec: SystemSpec, strict: bool = True) -> LogicalGate:
    """
    Noiseless action of ``plan`` on the logical basis, projected on the code
    space and made unitary by polar decomposition.

    With ``strict`` a leakage above ``LEAKAGE_LIMIT`` raises ``LeakageError``.
    """
    if plan.n_qubits != spec.n_qubits:
        raise ValueError(f"Plan acts on {plan.n_qubits} qubits, system has {spec.n_qubits}")
    c = logical_basis(spec)
    d = c.shape[1]
    outputs = np.stack(
        [execute_braid(plan, QuantumState.from_vector(c[:, b])).data for b in range(d)], axis=1
    )
    raw = c.conj().T @ outputs
    leakage = max(0.0, 1 - float(np.linalg.norm(raw) ** 2) / d)
    if strict and leakage > LEAKAGE_LIMIT:
        raise LeakageError(f"Leakage {leakage:.3f} out of the code space exceeds {LEAKAGE_LIMIT}")
    u, _ = polar(raw)
    return LogicalGate(u, raw, leakage)


def export_circuit(plan: TrotterPlan, fmt: str = "native") -> str:
    from .exporters import resolve

    return resolve(fmt)().render(plan)


# ---------------------------------------------------------------------------
# Gate presets
# ---------------------------------------------------------------------------

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_XX = np.kron(_X, _X)


def _rz(phi: float) -> np.ndarray:
    """exp(-i phi Z / 2) with the global phase removed from |0>."""
    return np.diag([1, np.exp(1j * phi)]).astype(complex)


@dataclass(frozen=True)
class GatePreset:
    name: str
    kind: SystemKind
    arm: Optional[str]
    target_phi: float
    delta_tilde: float
    ideal: np.ndarray = field(repr=False)
    n_equator: int = 3

    def default_spec(self) -> SystemSpec:
        if self.kind is SystemKind.TEN_QUBIT:
            return SystemSpec.ten_qubit()
        return SystemSpec.four_qubit()


def _preset(name, kind, arm, phi, delta, ideal) -> GatePreset:
    return GatePreset(name, kind, arm, phi, delta, ideal)


_FOUR, _TEN = SystemKind.FOUR_QUBIT, SystemKind.TEN_QUBIT

# |D~| at the noiseless fidelity maximum of the n_equator = 3 schedule
S_DELTA_TILDE = 3.75
T_DELTA_TILDE = 4.0
GATE_PRESETS: Dict[str, GatePreset] = {
    p.name: p
    for p in (
        _preset("S", _FOUR, "left", HALF_PI, S_DELTA_TILDE, _rz(HALF_PI)),
        _preset("Sdg", _FOUR, "left", -HALF_PI, S_DELTA_TILDE, _rz(-HALF_PI)),
        _preset("T", _FOUR, "left", math.pi / 4, T_DELTA_TILDE, _rz(math.pi / 4)),
        _preset("Tdg", _FOUR, "left", -math.pi / 4, T_DELTA_TILDE, _rz(-math.pi / 4)),
        # middle loops realize R_xx(-phi)
        _preset("Rxx", _TEN, "middle", -HALF_PI, S_DELTA_TILDE, expm(-0.25j * math.pi * _XX)),
        _preset("Rxxdg", _TEN, "middle", HALF_PI, S_DELTA_TILDE, expm(0.25j * math.pi * _XX)),
        _preset("I", _FOUR, None, 0.0, 0.0, np.eye(2, dtype=complex)),
        _preset("II", _TEN, None, 0.0, 0.0, np.eye(4, dtype=complex)),
    )
}


def gate_preset(name: str) -> GatePreset:
    try:
        return GATE_PRESETS[name]
    except KeyError:
        raise ValueError(f"Unknown gate '{name}', expect one of {sorted(GATE_PRESETS)}") from None


def ideal_gate(name: str) -> np.ndarray:
    return gate_preset(name).ideal


def plan_for_gate(
    name: str,
    delta_tilde: Optional[float] = None,
    n_equator: Optional[int] = None,
    n_qubits: Optional[int] = None,
) -> TrotterPlan:
    preset = gate_preset(name)
    n_qubits = n_qubits or preset.default_spec().n_qubits
    if preset.arm is None:
        return TrotterPlan.empty(n_qubits)
    path = clock_path(preset.target_phi, arm=preset.arm)
    return trotterize(
        path,
        delta_tilde if delta_tilde is not None else preset.delta_tilde,
        n_equator if n_equator is not None else preset.n_equator,
        preset.arm,
        n_qubits,
    )


def realized_rotation(arm: str, target_phi: float) -> Tuple[str, float]:
    """Logical rotation a loop of ``arm`` with azimuth ``target_phi`` realizes."""
    kind = "Rxx" if arm == "middle" else "Rz"
    return kind, ORIENTATION[arm] * target_phi
