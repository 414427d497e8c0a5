"""
Line based circuit format::

    # braidlab-native 1
    qubits 4
    RZZ q0 q1 0.866025403784
"""
from typing import List, Tuple

from ..engine import TwoPauliRotation
from ._base import ANGLE_FORMAT, CircuitExporter
from ._registry import register

MAGIC = "# braidlab-native 1"


class NativeExporter(CircuitExporter):
    NAME = "native"
    EXTENSION = ".txt"

    def header(self, n_qubits: int) -> List[str]:
        return [MAGIC, f"qubits {n_qubits}"]

    def gate_line(self, gate: TwoPauliRotation) -> str:
        angle = ANGLE_FORMAT.format(gate.angle)
        return f"{gate.name} q{gate.qubit_a} q{gate.qubit_b} {angle}"


def _qubit(token: str, lineno: int) -> int:
    if not token.startswith("q") or not token[1:].isdigit():
        raise ValueError(f"Line {lineno}: bad qubit '{token}'")
    return int(token[1:])


def parse_native(text: str) -> Tuple[int, List[TwoPauliRotation]]:
    lines = [s.strip() for s in text.splitlines()]
    if not lines or lines[0] != MAGIC:
        raise ValueError("Missing native circuit header")
    n_qubits = None
    gates = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "qubits" and len(parts) == 2:
            n_qubits = int(parts[1])
            continue
        if len(parts) != 4 or len(parts[0]) != 3 or not parts[0].startswith("R"):
            raise ValueError(f"Line {lineno}: cannot parse '{line}'")
        name = parts[0]
        gates.append(
            TwoPauliRotation(
                name[1], name[2], _qubit(parts[1], lineno), _qubit(parts[2], lineno), float(parts[3])
            )
        )
    if n_qubits is None:
        raise ValueError("Missing qubit count")
    return n_qubits, gates


register("native", NativeExporter)
