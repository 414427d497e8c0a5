"""
Fermionic reference model for the Y-junction Hamiltonians.

Majorana operators live on ``n_modes`` auxiliary qubits through the chain
mapping

    g_{2k}   = Z_0 ... Z_{k-1} X_k
    g_{2k+1} = Z_0 ... Z_{k-1} Y_k

Mode pairs are ``(g0, g1), (g2, g3)`` for four Majoranas and
``(g0, g1), (g2, g3), (gp0, gp1), (gp2, gp3), (z0, z1)`` for ten.
"""
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from .model import ClockArm
from .pauli import OperatorSum, PauliString, multiply, to_dense

_LABELS_4 = ("g0", "g1", "g2", "g3")
_LABELS_10 = ("g0", "g1", "g2", "g3", "gp0", "gp1", "gp2", "gp3", "z0", "z1")

# arm -> (centre, x partner, y partner, z partner)
_ARM_COUPLINGS = {
    "left": ("g0", "g3", "g2", "g1"),
    "right": ("gp0", "gp3", "gp2", "gp1"),
    "middle": ("z0", "g2", "gp3", "z1"),
}
_ARM_ORDER = ("left", "right", "middle")

_PARITY_PAIRS = {
    "h": ("g0", "g1"),
    "n": ("g2", "g3"),
    "h'": ("gp0", "gp1"),
    "n'": ("gp2", "gp3"),
    "h_a": ("z0", "z1"),
}


def chain_majoranas(n_modes: int) -> Tuple[PauliString, ...]:
    out = []
    for k in range(n_modes):
        string = {j: "Z" for j in range(k)}
        out.append(PauliString.from_sparse(n_modes, {**string, k: "X"}))
        out.append(PauliString.from_sparse(n_modes, {**string, k: "Y"}))
    return tuple(out)


@dataclass(frozen=True)
class MajoranaSystem:
    n_modes: int
    labels: Tuple[str, ...]
    majorana_ops: Tuple[PauliString, ...]

    @staticmethod
    def four() -> "MajoranaSystem":
        return MajoranaSystem(2, _LABELS_4, chain_majoranas(2))

    @staticmethod
    def ten() -> "MajoranaSystem":
        return MajoranaSystem(5, _LABELS_10, chain_majoranas(5))

    def majorana(self, label: str) -> PauliString:
        try:
            return self.majorana_ops[self.labels.index(label)]
        except ValueError:
            raise ValueError(f"No Majorana '{label}' in a {2 * self.n_modes}-mode system") from None

    def bilinear(self, a: str, b: str) -> PauliString:
        """i a b"""
        return multiply(self.majorana(a), self.majorana(b)).with_phase(1)

    def anticommutator_residual(self) -> float:
        mats = [to_dense(g) for g in self.majorana_ops]
        eye = np.eye(mats[0].shape[0])
        worst = 0.0
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                target = 2 * eye if i == j else 0 * eye
                worst = max(worst, float(np.abs(a @ b + b @ a - target).max()))
        return worst


def build_majorana_hamiltonian(arms: Sequence[ClockArm]) -> OperatorSum:
    """
    Sum over arms of ``i c (D . (g_x, g_y, g_z))`` with ``c`` the central Majorana.

    One arm gives the four-Majorana junction, three arms (left, right,
    middle) the ten-Majorana one.
    """
    if len(arms) == 1:
        system = MajoranaSystem.four()
    elif len(arms) == 3:
        system = MajoranaSystem.ten()
    else:
        raise ValueError(f"Expect 1 or 3 clock arms, got {len(arms)}")

    terms = []
    for name, arm in zip(_ARM_ORDER, arms):
        centre, *partners = _ARM_COUPLINGS[name]
        for coupling, partner in zip(arm.cartesian(), partners):
            terms.append((coupling, system.bilinear(centre, partner)))
    return OperatorSum.from_terms(system.n_modes, terms)


def system_for(arms: Sequence[ClockArm]) -> MajoranaSystem:
    return MajoranaSystem.four() if len(arms) == 1 else MajoranaSystem.ten()


def parity_operators(system: MajoranaSystem) -> Dict[str, PauliString]:
    """``h = i g0 g1``, ``n = i g2 g3`` and the primed / middle analogues."""
    names = ("h", "n") if system.n_modes == 2 else tuple(_PARITY_PAIRS)
    return {k: system.bilinear(*_PARITY_PAIRS[k]) for k in names}


def zero_modes(system: MajoranaSystem) -> Dict[str, PauliString]:
    """Majoranas decoupled from the idle Hamiltonian."""
    names = ("g2", "g3") if system.n_modes == 2 else ("g2", "g3", "gp2", "gp3")
    return {k: system.majorana(k) for k in names}
