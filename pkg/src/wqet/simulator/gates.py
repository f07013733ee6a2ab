"""Gate operations: one-qubit unitaries, multi-controlled unitaries, measurements and classically conditioned gates.

Named gates carry their name and parameters so circuits can be written to and read back from
the text form in `wqet.simulator.circuit`.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from wqet.simulator.constants import ATOL
from wqet.simulator.state import InvalidQubitError, SimulationError, check_qubit


class NonUnitaryError(SimulationError):
    """Raised when a gate matrix is not unitary."""


class Basis(str, Enum):
    Z = "Z"
    X = "X"


I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=np.complex128)

PAULI_MATRICES = {"I": I2, "X": X, "Y": Y, "Z": Z}


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=np.complex128)


_FIXED_GATES: dict[str, np.ndarray] = {"x": X, "y": Y, "z": Z, "h": H, "s": S, "id": I2}
_PARAMETRIC_GATES: dict[str, Callable[[float], np.ndarray]] = {"ry": ry_matrix, "rz": rz_matrix}


def gate_matrix(name: str, params: dict[str, float] | None = None) -> np.ndarray:
    """Look up the matrix of a named gate (`x`, `h`, `ry` with `theta`, ...)."""
    params = params or {}
    if name in _FIXED_GATES:
        return _FIXED_GATES[name]
    if name in _PARAMETRIC_GATES:
        try:
            return _PARAMETRIC_GATES[name](params["theta"])
        except KeyError:
            raise SimulationError(f"Gate {name!r} needs a 'theta' parameter") from None
    if name == "u":
        try:
            values = [params[f"m{i}"] for i in range(8)]
        except KeyError:
            raise SimulationError("Gate 'u' needs parameters m0..m7") from None
        return np.array(values[0::2], dtype=np.complex128).reshape(2, 2) + 1j * np.array(values[1::2]).reshape(2, 2)
    raise SimulationError(f"Unknown gate {name!r} (available: {sorted([*_FIXED_GATES, *_PARAMETRIC_GATES, 'u'])})")


def check_unitary(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (2, 2):
        raise NonUnitaryError(f"Expected a 2x2 matrix, got shape {matrix.shape}")
    if not np.allclose(matrix.conj().T @ matrix, I2, atol=ATOL, rtol=0):
        raise NonUnitaryError(f"Matrix is not unitary:\n{matrix}")
    return matrix


def _matrix_params(matrix: np.ndarray) -> dict[str, float]:
    flat = np.asarray(matrix, dtype=np.complex128).reshape(-1)
    params = {}
    for i, value in enumerate(flat):
        params[f"m{2 * i}"] = float(value.real)
        params[f"m{2 * i + 1}"] = float(value.imag)
    return params


@dataclass(frozen=True, eq=False)
class Unitary1Q:
    name: str
    matrix: np.ndarray
    target: int
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "matrix", check_unitary(self.matrix))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def validate(self, num_qubits: int) -> None:
        check_qubit(self.target, num_qubits)


@dataclass(frozen=True, eq=False)
class ControlledUnitary:
    name: str
    matrix: np.ndarray
    controls: tuple[int, ...]
    target: int
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "matrix", check_unitary(self.matrix))
        object.__setattr__(self, "controls", tuple(self.controls))
        if not self.controls:
            raise SimulationError("A controlled gate needs at least one control")
        if self.target in self.controls:
            raise InvalidQubitError(f"Target {self.target} is also a control {self.controls}")
        if len(set(self.controls)) != len(self.controls):
            raise InvalidQubitError(f"Duplicate controls {self.controls}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)

    def validate(self, num_qubits: int) -> None:
        for qubit in self.qubits:
            check_qubit(qubit, num_qubits)


@dataclass(frozen=True)
class Measure:
    target: int
    basis: Basis
    bit: str

    def __post_init__(self):
        object.__setattr__(self, "basis", Basis(self.basis))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def validate(self, num_qubits: int) -> None:
        check_qubit(self.target, num_qubits)


@dataclass(frozen=True, eq=False)
class Conditioned:
    bit: str
    value: int
    inner: Unitary1Q | ControlledUnitary

    def __post_init__(self):
        if self.value not in (0, 1):
            raise SimulationError(f"Condition value must be 0 or 1, got {self.value}")
        if not isinstance(self.inner, Unitary1Q | ControlledUnitary):
            raise SimulationError(f"Only unitary gates can be conditioned, got {type(self.inner).__name__}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.inner.qubits

    def validate(self, num_qubits: int) -> None:
        self.inner.validate(num_qubits)


GateOp = Unitary1Q | ControlledUnitary | Measure | Conditioned


# === Constructors ===


def gate(name: str, target: int, **params: float) -> Unitary1Q:
    return Unitary1Q(name, gate_matrix(name, params), target, tuple(params.items()))


def controlled(name: str, controls: int | tuple[int, ...], target: int, **params: float) -> ControlledUnitary:
    if isinstance(controls, int):
        controls = (controls,)
    return ControlledUnitary(name, gate_matrix(name, params), tuple(controls), target, tuple(params.items()))


def custom(matrix: np.ndarray, target: int, controls: tuple[int, ...] = ()) -> Unitary1Q | ControlledUnitary:
    """Wrap an arbitrary 2x2 unitary; it serialises as gate `u` with its eight real components."""
    params = tuple(_matrix_params(matrix).items())
    if controls:
        return ControlledUnitary("u", matrix, tuple(controls), target, params)
    return Unitary1Q("u", matrix, target, params)


def measure(target: int, bit: str, basis: Basis | str = Basis.Z) -> Measure:
    return Measure(target, Basis(basis), bit)


def conditioned(bit: str, value: int, inner: Unitary1Q | ControlledUnitary) -> Conditioned:
    return Conditioned(bit, value, inner)
