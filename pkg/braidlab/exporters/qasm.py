from typing import List

from ..engine import TwoPauliRotation
from ._base import ANGLE_FORMAT, CircuitExporter
from ._registry import register


class QasmExporter(CircuitExporter):
    NAME = "qasm"
    EXTENSION = ".qasm"

    def header(self, n_qubits: int) -> List[str]:
        return ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{n_qubits}];"]

    def gate_line(self, gate: TwoPauliRotation) -> str:
        if gate.axis_a != gate.axis_b:
            raise ValueError(f"OpenQASM has no {gate.name} gate")
        angle = ANGLE_FORMAT.format(gate.angle)
        return f"{gate.name.lower()}({angle}) q[{gate.qubit_a}],q[{gate.qubit_b}];"


register("qasm", QasmExporter)
