"""Dense statevector and classical register.

Qubit 0 is the most significant position of a basis label, so `|100>` has qubit 0
excited. Internally the amplitudes are viewed as a tensor of shape `(2,) * n`
whose axis `q` is qubit `q`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from wqet.simulator.constants import ATOL, MAX_QUBITS


class SimulationError(ValueError):
    """Base class for errors raised while building or running circuits."""


class InvalidQubitError(SimulationError):
    """Raised when a qubit index is outside the register."""


class TooManyQubitsError(SimulationError):
    """Raised when a register would exceed the dense-simulation cap."""


class UnsetClassicalBitError(SimulationError):
    """Raised when a conditioned gate reads a classical bit that was never written."""


def check_qubit(qubit: int, num_qubits: int) -> None:
    if not 0 <= qubit < num_qubits:
        raise InvalidQubitError(f"Qubit index {qubit} out of range for {num_qubits} qubits")


def check_register_size(num_qubits: int) -> None:
    if num_qubits < 1:
        raise InvalidQubitError(f"A register needs at least one qubit, got {num_qubits}")
    if num_qubits > MAX_QUBITS:
        raise TooManyQubitsError(f"{num_qubits} qubits requested, the dense simulator supports at most {MAX_QUBITS}")


@dataclass(eq=False)
class QuantumState:
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        size = self.amplitudes.size
        if size < 2 or size & (size - 1):
            raise SimulationError(f"Amplitude vector length must be a power of two >= 2, got {size}")
        check_register_size(size.bit_length() - 1)
        if abs(self.norm() - 1.0) > ATOL:
            raise SimulationError(f"State is not normalised (norm^2 = {self.norm():.12f})")

    @classmethod
    def zero(cls, num_qubits: int) -> QuantumState:
        check_register_size(num_qubits)
        amplitudes = np.zeros(2**num_qubits, dtype=np.complex128)
        amplitudes[0] = 1.0
        return cls(amplitudes)

    @classmethod
    def basis(cls, label: str) -> QuantumState:
        """Computational basis state from a bit label such as `"100"` (qubit 0 first)."""
        check_register_size(len(label))
        amplitudes = np.zeros(2 ** len(label), dtype=np.complex128)
        amplitudes[int(label, 2)] = 1.0
        return cls(amplitudes)

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> QuantumState:
        return cls(tensor.reshape(-1))

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def norm(self) -> float:
        """Squared norm; 1 for every valid state."""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> QuantumState:
        return QuantumState(self.amplitudes.copy())

    def amplitude(self, label: str) -> complex:
        if len(label) != self.num_qubits:
            raise InvalidQubitError(f"Label {label!r} does not match {self.num_qubits} qubits")
        return complex(self.amplitudes[int(label, 2)])

    def equals_up_to_phase(self, other: QuantumState, atol: float = ATOL) -> bool:
        if other.num_qubits != self.num_qubits:
            return False
        overlap = np.vdot(self.amplitudes, other.amplitudes)
        if abs(overlap) < atol:
            return False
        phase = overlap / abs(overlap)
        return bool(np.allclose(self.amplitudes * phase, other.amplitudes, atol=atol, rtol=0))


@dataclass
class ClassicalRecord:
    bits: dict[str, int] = field(default_factory=dict)

    def set(self, bit: str, outcome: int) -> None:
        if outcome not in (0, 1):
            raise SimulationError(f"Classical outcome must be 0 or 1, got {outcome}")
        self.bits[bit] = outcome

    def get(self, bit: str) -> int:
        try:
            return self.bits[bit]
        except KeyError:
            raise UnsetClassicalBitError(f"Classical bit {bit!r} has not been written yet") from None

    def sign(self, bit: str) -> int:
        """The measurement sign mu = (-1)^outcome."""
        return 1 - 2 * self.get(bit)

    def copy(self) -> ClassicalRecord:
        return ClassicalRecord(dict(self.bits))

    def __contains__(self, bit: str) -> bool:
        return bit in self.bits
