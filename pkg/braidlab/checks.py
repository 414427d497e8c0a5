"""
Invariant suites run by ``braidlab verify``.

Every check returns a ``CheckResult`` with the measured residual and the
tolerance it was held to.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Sequence

import numpy as np

from .engine import expectation
from .holonomy import (
    GapClosedError,
    analytic_gauge_fields,
    analytic_holonomy,
    arm_holonomy,
    finite_difference_fields,
    majorana_wilson_loop,
)
from .majorana_ref import MajoranaSystem, build_majorana_hamiltonian
from .model import (
    ClockArm,
    SystemKind,
    SystemSpec,
    code_stabilizers,
    conserved_names,
    dependency_phase,
    hamiltonian,
    named_conserved,
)
from .pauli import to_dense
from .protocol import LOGICAL_LABELS, PrepMethod, clock_path, prepare_logical
from .subspace import analytic_effective, arm_sector, effective_hamiltonian, gauge_align

_log = logging.getLogger(__name__)

HOLONOMY_TOLERANCE = 1e-3
GAUGE_FIELD_TOLERANCE = 1e-6
MAJORANA_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def to_dict(self) -> Dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _result(suite: str, name: str, residual: float, tol: float, detail: str = "") -> CheckResult:
    residual = float(residual)
    return CheckResult(suite, name, bool(residual <= tol), residual, tol, detail)


def _random_angles(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.stack([rng.uniform(0, math.pi, n), rng.uniform(0, 2 * math.pi, n)], axis=1)


def _moving_arms(spec: SystemSpec) -> List[str]:
    return list(spec.arms())


def algebra_suite(
    spec: SystemSpec, samples: int, tol: float, rng: np.random.Generator, force_conserved: Sequence[str] = ()
) -> List[CheckResult]:
    out = []
    ww = named_conserved(spec)
    names = list(conserved_names(spec)) + [n for n in force_conserved if n not in conserved_names(spec)]
    for n in names:
        if n not in ww:
            raise ValueError(f"No operator '{n}' on {spec.kind.value} system")

    squares = spec.kind is SystemKind.FOUR_QUBIT or (spec.kind is SystemKind.TETRAD_TORUS and not spec.bars)
    worst_comm = 0.0
    worst_square = 0.0
    for arm in _moving_arms(spec):
        for a, b in _random_angles(rng, samples):
            moved = spec.with_arm(arm, spec.arm(arm).moved(a, b))
            h = hamiltonian(moved)
            for n in names:
                worst_comm = max(worst_comm, h.commutator(ww[n]).norm())
            if squares:
                m = to_dense(h)
                mag = moved.left.magnitude
                worst_square = max(worst_square, float(np.abs(m @ m - mag ** 2 * np.eye(len(m))).max()))
    out.append(_result("algebra", "conserved_commute", worst_comm, tol, f"operators {names}"))
    if squares:
        out.append(_result("algebra", "hamiltonian_square", worst_square, tol))

    if spec.kind is SystemKind.FOUR_QUBIT:
        out.append(_block_spectra(spec, rng, samples, tol))
    if spec.kind is SystemKind.TEN_QUBIT:
        phase = dependency_phase(spec)
        out.append(
            _result("algebra", "dependency_relation", abs(abs(phase) - 1), tol, f"product = {phase} W7")
        )
    return out


def _block_spectra(spec: SystemSpec, rng: np.random.Generator, samples: int, tol: float) -> CheckResult:
    from .subspace import simultaneous_eigenbasis

    ww = named_conserved(spec)
    basis = simultaneous_eigenbasis([ww["W1"], ww["W2"]], spec.n_qubits, ("W1", "W2"))
    worst = 0.0
    for a, b in _random_angles(rng, samples):
        h = hamiltonian(spec.with_arm("left", spec.left.moved(a, b)))
        spectra = [
            np.linalg.eigvalsh(effective_hamiltonian(h, basis, {"W1": s1, "W2": s2}).matrix)
            for s1 in (-1, 1)
            for s2 in (-1, 1)
        ]
        worst = max(worst, max(float(np.abs(s - spectra[0]).max()) for s in spectra))
    return _result("algebra", "block_spectra", worst, tol, "four (W1, W2) blocks")


def effective_suite(spec: SystemSpec, samples: int, tol: float, rng: np.random.Generator) -> List[CheckResult]:
    if spec.bars:
        return [CheckResult("effective", "skipped", True, 0.0, tol, "extra couplings present")]
    out = []
    for arm in _moving_arms(spec):
        sector = arm_sector(spec, arm)
        worst = 0.0
        for a, b in _random_angles(rng, samples):
            moved = spec.with_arm(arm, spec.arm(arm).moved(a, b))
            m = effective_hamiltonian(hamiltonian(moved), sector)
            _, residual = gauge_align(m, analytic_effective(moved, arm))
            worst = max(worst, residual)
        out.append(_result("effective", f"{arm}_arm", worst, tol, f"sector dimension {len(sector)}"))
    return out


def gauge_field_suite(spec: SystemSpec, samples: int, rng: np.random.Generator) -> List[CheckResult]:
    out = []
    for arm in _moving_arms(spec):
        worst = 0.0
        anti = 0.0
        for a, b in _random_angles(rng, samples):
            exact = analytic_gauge_fields(spec, arm, a, b)
            approx = finite_difference_fields(arm, a, b)
            anti = max(anti, exact.anti_hermitian_residual())
            worst = max(worst, max(float(np.abs(x - y).max()) for x, y in zip(exact.matrices, approx.matrices)))
        out.append(_result("gauge_fields", f"{arm}_finite_difference", worst, GAUGE_FIELD_TOLERANCE))
        out.append(_result("gauge_fields", f"{arm}_anti_hermitian", anti, 1e-12))
    return out


def _eigenphase_error(phases: np.ndarray, expected: float) -> float:
    target = np.sort(np.concatenate([-np.full(len(phases) // 2, expected), np.full(len(phases) // 2, expected)]))
    return float(np.abs(np.sort(phases) - target).max())


def holonomy_suite(spec: SystemSpec, steps: int, targets: Iterable[float]) -> List[CheckResult]:
    out = []
    for arm in _moving_arms(spec):
        if spec.kind is SystemKind.TETRAD_TORUS and spec.bars:
            break
        for phi in targets:
            path = clock_path(phi, steps, arm)
            try:
                hol = arm_holonomy(spec, arm, path)
            except GapClosedError as e:
                out.append(CheckResult("holonomy", f"{arm}_phi={phi:.6g}", False, math.inf, HOLONOMY_TOLERANCE, str(e)))
                continue
            err = _eigenphase_error(hol.eigenphases, abs(phi) / 2)
            out.append(_result("holonomy", f"{arm}_phi={phi:.6g}", err, HOLONOMY_TOLERANCE, "eigenphases +-phi/2"))
            analytic = np.sort(np.angle(np.linalg.eigvals(analytic_holonomy(arm, path))))
            out.append(
                _result(
                    "holonomy",
                    f"{arm}_phi={phi:.6g}_analytic",
                    float(np.abs(analytic - hol.eigenphases).max()),
                    HOLONOMY_TOLERANCE,
                )
            )
    return out


def majorana_suite(samples: int, tol: float, steps: int, rng: np.random.Generator) -> List[CheckResult]:
    system = MajoranaSystem.four()
    out = [_result("majorana", "anticommutators", system.anticommutator_residual(), tol)]

    spin = SystemSpec.four_qubit()
    worst = 0.0
    for a, b in _random_angles(rng, samples):
        arm = ClockArm(1.0, a, b)
        e_spin = np.linalg.eigvalsh(to_dense(hamiltonian(spin.with_arm("left", arm))))
        e_maj = np.linalg.eigvalsh(to_dense(build_majorana_hamiltonian([arm])))
        worst = max(worst, float(np.abs(e_spin - np.sort(np.repeat(e_maj, 4))).max()))
    out.append(_result("majorana", "spectra", worst, tol, "spin spectrum = 4 x fermionic spectrum"))

    path = clock_path(math.pi / 2, steps)
    spin_phases = arm_holonomy(spin, "left", path).eigenphases
    maj_phases = majorana_wilson_loop(path).eigenphases
    out.append(_result("majorana", "octant_holonomy", float(np.abs(spin_phases - maj_phases).max()), MAJORANA_TOLERANCE))
    return out


def initialization_suite(spec: SystemSpec, tol: float) -> List[CheckResult]:
    out = []
    stabilizers = code_stabilizers(spec)
    labels = [(lab,) * spec.n_logical for lab in LOGICAL_LABELS]
    if spec.n_logical == 2:
        labels.append(("0", "i+"))
    worst_overlap = 0.0
    worst_w = 0.0
    for lab in labels:
        explicit = prepare_logical(lab, spec, PrepMethod.EXPLICIT)
        replay = prepare_logical(lab, spec, PrepMethod.CIRCUIT)
        worst_overlap = max(worst_overlap, 1 - abs(explicit.overlap(replay)))
        for p in stabilizers.values():
            worst_w = max(worst_w, abs(expectation(replay, p) + 1))
    out.append(_result("initialization", "circuit_overlap", worst_overlap, tol))
    out.append(_result("initialization", "stabilizers_minus_one", worst_w, tol))
    return out


def run_checks(
    spec: SystemSpec,
    suites: Sequence[str],
    samples: int = 20,
    tol: float = 1e-8,
    holonomy_steps: int = 200,
    holonomy_targets: Sequence[float] = (math.pi / 2,),
    force_conserved: Sequence[str] = (),
    seed: int = 0,
) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    runners: Dict[str, Callable[[], List[CheckResult]]] = {
        "algebra": lambda: algebra_suite(spec, samples, tol, rng, force_conserved),
        "effective": lambda: effective_suite(spec, samples, tol, rng),
        "gauge_fields": lambda: gauge_field_suite(spec, samples, rng),
        "holonomy": lambda: holonomy_suite(spec, holonomy_steps, holonomy_targets),
        "majorana": lambda: majorana_suite(samples, tol, holonomy_steps, rng),
        "initialization": lambda: initialization_suite(spec, tol),
    }
    out: List[CheckResult] = []
    for name in suites:
        _log.info(f"Running {name} checks")
        results = runners[name]()
        for r in results:
            level = logging.DEBUG if r.passed else logging.ERROR
            _log.log(level, f"{r.suite}/{r.name}: residual {r.residual:.3g} (tolerance {r.tolerance:g})")
        out.extend(results)
    return out
