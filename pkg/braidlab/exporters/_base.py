from abc import ABC, abstractmethod
from typing import Iterable, List

from ..engine import GateOp, TwoPauliRotation

ANGLE_FORMAT = "{:.12f}"


class CircuitExporter(ABC):
    NAME = "*unset*"
    EXTENSION = ".txt"

    def render(self, plan) -> str:
        lines = self.header(plan.n_qubits)
        lines.extend(self.gate_line(g) for g in self._rotations(plan.gates))
        return "\n".join(lines) + "\n"

    @staticmethod
    def _rotations(gates: Iterable[GateOp]) -> Iterable[TwoPauliRotation]:
        for g in gates:
            if not isinstance(g, TwoPauliRotation):
                raise ValueError(f"Only two-Pauli rotations can be exported, got {g}")
            yield g

    @abstractmethod
    def header(self, n_qubits: int) -> List[str]:
        pass

    @abstractmethod
    def gate_line(self, gate: TwoPauliRotation) -> str:
        pass
