"""
Non-Abelian holonomies of clock-arm loops.

Two independent routes are provided: a numerical Wilson loop that follows
the instantaneous low-energy frames of any Hamiltonian family, and the
closed-form gauge fields of the effective models integrated along the same
path.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm, polar

from .majorana_ref import MajoranaSystem, build_majorana_hamiltonian, parity_operators
from .model import ClockArm, SystemKind, SystemSpec, hamiltonian, logical_basis
from .pauli import OperatorSum
from .subspace import LabeledBasis, arm_sector, effective_pauli, simultaneous_eigenbasis

_log = logging.getLogger(__name__)

Point = Tuple[float, float]
HamiltonianFamily = Callable[[float, float], OperatorSum]

# loop target phi -> realized logical rotation sign
#   left / right:  R_z(+phi)
#   middle:        R_xx(-phi)
ORIENTATION = {"left": 1, "right": 1, "middle": -1}

GAP_TOLERANCE = 1e-6
_DEGENERACY_TOL = 1e-8

_PARAMETER_NAMES = {
    "left": ("theta", "phi"),
    "right": ("theta'", "phi'"),
    "middle": ("alpha", "beta"),
}


class GapClosedError(RuntimeError):
    """The selected low-energy levels stopped being separated from the rest."""

    def __init__(self, message: str, point: Optional[Point] = None):
        super().__init__(message)
        self.point = point


@dataclass(frozen=True)
class Segment:
    start: Point
    end: Point

    def point(self, f: float) -> Point:
        (a0, b0), (a1, b1) = self.start, self.end
        return (a0 + f * (a1 - a0), b0 + f * (b1 - b0))

    def solid_angle(self) -> float:
        """Integral of (1 - cos a) db along the segment."""
        (a0, b0), (a1, b1) = self.start, self.end
        db = b1 - b0
        da = a1 - a0
        if abs(da) < 1e-15:
            return db * (1 - math.cos(a0))
        return db * (1 - (math.sin(a1) - math.sin(a0)) / da)

    def span(self) -> float:
        """Angular length, exact for meridians and the equator."""
        (a0, b0), (a1, b1) = self.start, self.end
        return math.hypot(a1 - a0, (b1 - b0) * math.sin((a0 + a1) / 2))


def _unit(a: float, b: float) -> np.ndarray:
    return np.array([math.sin(a) * math.cos(b), math.sin(a) * math.sin(b), math.cos(a)])


@dataclass(frozen=True)
class ParamPath:
    """
    Piecewise linear path in (polar, azimuth) of one clock arm.

    ``steps_per_segment`` is either one count for every segment or a count
    per segment.
    """

    segments: Tuple[Segment, ...]
    steps_per_segment: Union[int, Tuple[int, ...]] = 100
    arm: str = "left"

    def __post_init__(self):
        if not self.segments:
            raise ValueError("Path needs at least one segment")
        if self.arm not in _PARAMETER_NAMES:
            raise ValueError(f"Unknown arm '{self.arm}'")
        for s in self.step_counts():
            if s < 1:
                raise ValueError(f"Segments need at least one step, got {s}")

    @staticmethod
    def through(points: Sequence[Point], steps_per_segment=100, arm: str = "left") -> "ParamPath":
        segs = tuple(Segment(tuple(a), tuple(b)) for a, b in zip(points[:-1], points[1:]))
        return ParamPath(segs, steps_per_segment, arm)

    def step_counts(self) -> Tuple[int, ...]:
        if isinstance(self.steps_per_segment, int):
            return (self.steps_per_segment,) * len(self.segments)
        if len(self.steps_per_segment) != len(self.segments):
            raise ValueError("Need one step count per segment")
        return tuple(self.steps_per_segment)

    def with_steps(self, steps: Union[int, Tuple[int, ...]]) -> "ParamPath":
        return ParamPath(self.segments, steps, self.arm)

    def points(self) -> np.ndarray:
        """Sampled parameters, shape (N + 1, 2), first row is the start."""
        out = [self.segments[0].start]
        for seg, n in zip(self.segments, self.step_counts()):
            out.extend(seg.point(k / n) for k in range(1, n + 1))
        return np.array(out, dtype=float)

    def closed(self, tol: float = 1e-9) -> bool:
        start, end = self.segments[0].start, self.segments[-1].end
        return bool(np.abs(_unit(*start) - _unit(*end)).max() < tol)

    def solid_angle(self) -> float:
        return sum(s.solid_angle() for s in self.segments)


# ---------------------------------------------------------------------------
# Analytic gauge fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaugeField:
    arm: str
    names: Tuple[str, str]
    matrices: Tuple[np.ndarray, np.ndarray]

    def component(self, name: str) -> np.ndarray:
        return self.matrices[self.names.index(name)]

    def along(self, da: float, db: float) -> np.ndarray:
        return da * self.matrices[0] + db * self.matrices[1]

    def anti_hermitian_residual(self) -> float:
        return max(float(np.abs(a + a.conj().T).max()) for a in self.matrices)


def _generators(arm: str) -> Tuple[np.ndarray, np.ndarray]:
    if arm == "middle":
        return effective_pauli("XIX"), effective_pauli("ZXX")
    return effective_pauli("YY"), effective_pauli("IZ")


def gauge_frame(arm: str, a: float, b: float) -> np.ndarray:
    """
    Frame unitary ``W`` with ground states ``W^+ |g0>``.

    left / right: ``exp(i a tau^y eta^y / 2) exp(-i b eta^z / 2)``
    middle: ``exp(-i a chi^x eta^x / 2) exp(-i b chi^z eta^x eta'^x / 2)``
    """
    g1, g2 = _generators(arm)
    s = -1 if arm == "middle" else 1
    return expm(s * 0.5j * a * g1) @ expm(-0.5j * b * g2)


def ground_indices(arm: str) -> List[int]:
    """Frame-basis indices of the idle ground space (tau^z = +1 or chi^z = +1)."""
    return [0, 1, 2, 3] if arm == "middle" else [0, 1]


def _check_arm(spec: Optional[SystemSpec], arm: str):
    if arm not in _PARAMETER_NAMES:
        raise ValueError(f"Unknown arm '{arm}'")
    if spec is not None:
        spec.arm(arm)


def analytic_gauge_fields(spec: Optional[SystemSpec], arm: str, a: float, b: float) -> GaugeField:
    """Closed-form ``A = W dW^+`` of the effective model of ``arm``."""
    _check_arm(spec, arm)
    ca, sa = math.cos(a), math.sin(a)
    if arm == "middle":
        a_a = 0.5j * effective_pauli("XIX")
        a_b = 0.5j * (effective_pauli("ZXX") * ca - effective_pauli("YXI") * sa)
    else:
        a_a = -0.5j * effective_pauli("YY")
        a_b = 0.5j * (effective_pauli("IZ") * ca - effective_pauli("YX") * sa)
    return GaugeField(arm, _PARAMETER_NAMES[arm], (a_a, a_b))


def _half_turn(g: np.ndarray, angle: float) -> np.ndarray:
    """``exp(-i angle g / 2)`` for an involution ``g``."""
    return math.cos(angle / 2) * np.eye(len(g), dtype=complex) - 1j * math.sin(angle / 2) * g


def rotation_product(arm: str, a: float, b: float) -> np.ndarray:
    """
    The frame of :func:`gauge_frame` written out as the product of its polar
    and azimuthal rotations in closed trigonometric form.
    """
    _check_arm(None, arm)
    if arm == "middle":
        u_polar = _half_turn(effective_pauli("XIX"), a)
        u_azimuth = _half_turn(effective_pauli("ZXX"), b)
    else:
        u_polar = _half_turn(effective_pauli("YY"), -a)
        u_azimuth = _half_turn(effective_pauli("IZ"), b)
    return u_polar @ u_azimuth


def finite_difference_fields(arm: str, a: float, b: float, h: float = 1e-5) -> GaugeField:
    """Central differences of :func:`rotation_product`, independent of the ``expm`` frames."""
    _check_arm(None, arm)
    w = rotation_product(arm, a, b)

    def d(fa, fb):
        up = rotation_product(arm, a + fa * h, b + fb * h)
        down = rotation_product(arm, a - fa * h, b - fb * h)
        return (up - down) / (2 * h)

    return GaugeField(
        arm,
        _PARAMETER_NAMES[arm],
        (w @ d(1, 0).conj().T, w @ d(0, 1).conj().T),
    )


def analytic_holonomy(arm: str, path: ParamPath) -> np.ndarray:
    """
    Path-ordered exponential of the analytic fields on the idle ground space,
    closed by the frame mismatch between the path's end and start.
    """
    _check_arm(None, arm)
    g = ground_indices(arm)
    pts = path.points()
    u = np.eye(len(g), dtype=complex)
    for p0, p1 in zip(pts[:-1], pts[1:]):
        mid = (p0 + p1) / 2
        da = analytic_gauge_fields(None, arm, *mid).along(*(p1 - p0))
        u = expm(-da[np.ix_(g, g)]) @ u
    close = gauge_frame(arm, *pts[0]) @ gauge_frame(arm, *pts[-1]).conj().T
    return close[np.ix_(g, g)] @ u


# ---------------------------------------------------------------------------
# Numerical Wilson loops
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WilsonLoop:
    """
    ``unitary`` acts on coefficients in ``frame``, the low-energy
    eigenvectors at the start of the path in sector coordinates.
    """

    unitary: np.ndarray
    frame: np.ndarray
    basis: LabeledBasis
    n_points: int

    @property
    def eigenphases(self) -> np.ndarray:
        return np.sort(np.angle(np.linalg.eigvals(self.unitary)))

    def physical_frame(self) -> np.ndarray:
        return self.basis.vectors @ self.frame


class _ProjectedFamily:
    """Hamiltonians of a family projected on a sector, cached per Pauli string."""

    def __init__(self, family: HamiltonianFamily, basis: LabeledBasis):
        self._family = family
        self._basis = basis
        self._cache: Dict[Tuple[int, int], np.ndarray] = {}

    def __call__(self, a: float, b: float) -> np.ndarray:
        h = self._family(a, b)
        dim = len(self._basis)
        out = np.zeros((dim, dim), dtype=complex)
        for c, p in h:
            key = (p.x, p.z)
            m = self._cache.get(key)
            if m is None:
                m = self._basis.project(p)
                self._cache[key] = m
            out += c * m
        return (out + out.conj().T) / 2


def _low_levels(h: np.ndarray, k: Optional[int], scale: float, point: Point, gap_tol: float):
    w, v = np.linalg.eigh(h)
    if k is None:
        k = int(np.count_nonzero(w < w[0] + _DEGENERACY_TOL * scale))
    if k < len(w) and w[k] - w[k - 1] < gap_tol * scale:
        raise GapClosedError(
            f"Gap {w[k] - w[k - 1]:.3g} below {gap_tol:g} x {scale:.3g} at {point}", point
        )
    return v[:, :k], k


def _unitary_part(m: np.ndarray) -> np.ndarray:
    u, _ = polar(m)
    return u


def wilson_loop(
    family: HamiltonianFamily,
    path: ParamPath,
    sector: LabeledBasis,
    n_levels: Optional[int] = None,
    gap_tol: float = GAP_TOLERANCE,
) -> WilsonLoop:
    """
    Discretized parallel transport of the lowest levels of ``family``
    restricted to ``sector`` around a closed ``path``.

    The number of transported levels is the ground degeneracy at the start
    unless ``n_levels`` is given.
    """
    if not path.closed():
        raise ValueError("Wilson loop needs a closed path")
    projected = _ProjectedFamily(family, sector)
    pts = path.points()

    h0 = projected(*pts[0])
    scale = max(float(np.abs(np.linalg.eigvalsh(h0)).max()), np.finfo(float).tiny)
    v0, k = _low_levels(h0, n_levels, scale, tuple(pts[0]), gap_tol)
    _log.debug(f"Transporting {k} levels over {len(pts) - 1} steps")

    u = np.eye(k, dtype=complex)
    prev = v0
    for p in pts[1:]:
        v, _ = _low_levels(projected(*p), k, scale, tuple(p), gap_tol)
        u = _unitary_part(v.conj().T @ prev) @ u
        prev = v
    u = _unitary_part(v0.conj().T @ prev) @ u
    return WilsonLoop(u, v0, sector, len(pts))


def arm_family(spec: SystemSpec, arm: str) -> HamiltonianFamily:
    base = spec.arm(arm)

    def family(a: float, b: float) -> OperatorSum:
        return hamiltonian(spec.with_arm(arm, base.moved(a, b)))

    return family


@dataclass(frozen=True)
class LogicalHolonomy:
    """Holonomy expressed on the logical states spanning the start ground space."""

    unitary: np.ndarray
    logical_indices: Tuple[int, ...]
    solid_angle: float
    loop: WilsonLoop

    @property
    def eigenphases(self) -> np.ndarray:
        return self.loop.eigenphases


def arm_holonomy(spec: SystemSpec, arm: str, path: ParamPath) -> LogicalHolonomy:
    """
    Wilson loop of one moving arm, rotated into the computational logical
    basis. Arms other than ``arm`` must be idle.
    """
    for name, other in spec.arms().items():
        if name != arm and not other.idle:
            raise ValueError(f"Arm '{name}' must be idle while '{arm}' moves")
    if spec.kind is SystemKind.TETRAD_TORUS and spec.bars:
        raise ValueError("Holonomies are defined without the extra torus couplings")

    sector = arm_sector(spec, arm)
    loop = wilson_loop(arm_family(spec, arm), path, sector)

    overlaps = logical_basis(spec).conj().T @ loop.physical_frame()
    rows = tuple(int(i) for i in np.flatnonzero(np.linalg.norm(overlaps, axis=1) ** 2 > 0.5))
    if len(rows) != overlaps.shape[1]:
        raise ValueError("Ground space at the path start is not spanned by logical states")
    frame = overlaps[list(rows), :]
    if np.abs(frame.conj().T @ frame - np.eye(len(rows))).max() > 1e-8:
        raise ValueError("Ground space at the path start leaks out of the code space")
    unitary = frame @ loop.unitary @ frame.conj().T
    return LogicalHolonomy(unitary, rows, path.solid_angle(), loop)


def middle_arm_holonomy(path: ParamPath, spec: Optional[SystemSpec] = None) -> LogicalHolonomy:
    """Two-qubit holonomy of the middle arm with both outer arms idle."""
    spec = spec or SystemSpec.ten_qubit()
    if spec.kind is not SystemKind.TEN_QUBIT:
        raise ValueError("Middle arm only exists on the ten-qubit system")
    return arm_holonomy(spec, "middle", path)


def majorana_wilson_loop(path: ParamPath, magnitude: float = 1.0) -> WilsonLoop:
    """Same loop on the four-Majorana junction, in the fermion parity basis."""
    system = MajoranaSystem.four()
    parity = parity_operators(system)
    basis = simultaneous_eigenbasis([parity["h"], parity["n"]], system.n_modes, ("h", "n"))

    def family(a: float, b: float) -> OperatorSum:
        return build_majorana_hamiltonian([ClockArm(magnitude, a, b)])

    return wilson_loop(family, path, basis)
