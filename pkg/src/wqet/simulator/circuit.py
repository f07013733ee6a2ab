"""Ordered gate programs and their line-oriented text form.

Text form, one operation per line (blank lines and `#` comments ignored)::

    qubits 3
    ry 0 theta=1.5707963267948966
    ry 1 ctrl=0 theta=1.9106332362490186
    x 0 ctrl=1
    measure 0 basis=X bit=mu
    if mu=1 z 1

A gate line is `<name> <target> [ctrl=<q>,<q>...] [<param>=<float> ...]`; floats are written
with `repr` so a round trip is exact. `if <bit>=<value>` prefixes a gate line to condition it.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator

from wqet.simulator.gates import (
    Basis,
    Conditioned,
    ControlledUnitary,
    GateOp,
    Measure,
    Unitary1Q,
    gate_matrix,
)
from wqet.simulator.state import SimulationError, check_register_size

_BIT_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
TEXT_HEADER = "# wqet circuit v1"


class CircuitFormatError(SimulationError):
    """Raised when a circuit text cannot be parsed."""


class Circuit:
    def __init__(self, num_qubits: int, ops: Iterable[GateOp] = ()):
        check_register_size(num_qubits)
        self.num_qubits = num_qubits
        self._ops: list[GateOp] = []
        self.extend(ops)

    def append(self, op: GateOp) -> Circuit:
        op.validate(self.num_qubits)
        for bit in _bits_of(op):
            if not _BIT_NAME.match(bit):
                raise SimulationError(f"Invalid classical bit name {bit!r}")
        self._ops.append(op)
        return self

    def extend(self, ops: Iterable[GateOp]) -> Circuit:
        for op in ops:
            self.append(op)
        return self

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise SimulationError(f"Cannot join circuits on {self.num_qubits} and {other.num_qubits} qubits")
        return Circuit(self.num_qubits, [*self._ops, *other.ops])

    @property
    def ops(self) -> tuple[GateOp, ...]:
        return tuple(self._ops)

    def __len__(self) -> int:
        return len(self._ops)

    def __iter__(self) -> Iterator[GateOp]:
        return iter(self._ops)

    @property
    def depth(self) -> int:
        """Longest chain of operations sharing a qubit or a classical bit."""
        qubit_level = [0] * self.num_qubits
        bit_level: dict[str, int] = {}
        for op in self._ops:
            level = max(qubit_level[q] for q in op.qubits)
            if isinstance(op, Conditioned):
                level = max(level, bit_level.get(op.bit, 0))
            level += 1
            for q in op.qubits:
                qubit_level[q] = level
            if isinstance(op, Measure):
                bit_level[op.bit] = level
        return max(qubit_level, default=0)

    @property
    def two_qubit_gate_count(self) -> int:
        return sum(1 for op in self._ops if isinstance(_unwrap(op), ControlledUnitary))

    @property
    def measurement_count(self) -> int:
        return sum(1 for op in self._ops if isinstance(op, Measure))

    @property
    def unitary_prefix_length(self) -> int:
        """Number of leading operations before the first measurement or conditioned gate."""
        for i, op in enumerate(self._ops):
            if not isinstance(op, Unitary1Q | ControlledUnitary):
                return i
        return len(self._ops)

    def to_text(self) -> str:
        lines = [TEXT_HEADER, f"qubits {self.num_qubits}"]
        lines.extend(_op_to_line(op) for op in self._ops)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Circuit:
        circuit: Circuit | None = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                if circuit is None:
                    keyword, _, count = line.partition(" ")
                    if keyword != "qubits":
                        raise CircuitFormatError("expected 'qubits <n>' before any operation")
                    circuit = cls(int(count))
                    continue
                circuit.append(_line_to_op(line))
            except (ValueError, KeyError, IndexError) as e:
                raise CircuitFormatError(f"line {lineno}: {e}") from e
        if circuit is None:
            raise CircuitFormatError("empty circuit text")
        return circuit

    def __repr__(self) -> str:
        return f"Circuit(num_qubits={self.num_qubits}, ops={len(self._ops)}, depth={self.depth})"


def _unwrap(op: GateOp) -> GateOp:
    return op.inner if isinstance(op, Conditioned) else op


def _bits_of(op: GateOp) -> tuple[str, ...]:
    if isinstance(op, Measure | Conditioned):
        return (op.bit,)
    return ()


def _gate_to_line(op: Unitary1Q | ControlledUnitary) -> str:
    parts = [op.name, str(op.target)]
    if isinstance(op, ControlledUnitary):
        parts.append("ctrl=" + ",".join(str(c) for c in op.controls))
    parts.extend(f"{key}={value!r}" for key, value in op.params)
    return " ".join(parts)


def _op_to_line(op: GateOp) -> str:
    if isinstance(op, Measure):
        return f"measure {op.target} basis={op.basis.value} bit={op.bit}"
    if isinstance(op, Conditioned):
        return f"if {op.bit}={op.value} {_gate_to_line(op.inner)}"
    return _gate_to_line(op)


def _line_to_gate(tokens: list[str]) -> Unitary1Q | ControlledUnitary:
    name, target, *options = tokens
    controls: tuple[int, ...] = ()
    params: dict[str, float] = {}
    for option in options:
        key, _, value = option.partition("=")
        if key == "ctrl":
            controls = tuple(int(c) for c in value.split(","))
        else:
            params[key] = float(value)
    matrix = gate_matrix(name, params)
    if controls:
        return ControlledUnitary(name, matrix, controls, int(target), tuple(params.items()))
    return Unitary1Q(name, matrix, int(target), tuple(params.items()))


def _line_to_op(line: str) -> GateOp:
    tokens = line.split()
    if tokens[0] == "measure":
        options = dict(token.partition("=")[::2] for token in tokens[2:])
        return Measure(int(tokens[1]), Basis(options["basis"]), options["bit"])
    if tokens[0] == "if":
        bit, _, value = tokens[1].partition("=")
        return Conditioned(bit, int(value), _line_to_gate(tokens[2:]))
    return _line_to_gate(tokens)
