"""Model Hamiltonian terms, the injected-energy formula and estimators.

Every local term is the number operator `H_n = |1><1|_n = (I - Z_n)/2`. Block Hamiltonians are
sums of local terms; the interaction `V` is the zero operator.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from wqet.simulator.engine import expectation_pauli
from wqet.simulator.pauli import PauliString
from wqet.simulator.state import InvalidQubitError, QuantumState, SimulationError


class EstimationError(SimulationError):
    """Raised when counts cannot be turned into an estimate."""


class E0Convention(str, Enum):
    TABLE_CONSISTENT = "table-consistent"
    AS_PRINTED = "as-printed"


class ModelParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(ge=2)
    h: float = Field(ge=0)
    k: float = Field(ge=0)

    @model_validator(mode="after")
    def _weights_not_both_zero(self) -> ModelParams:
        if self.h == 0 and self.k == 0:
            raise ValueError("At least one of the weights h, k must be positive")
        return self

    @property
    def excitation_weight(self) -> float:
        """Probability of the single-excitation sector, h^2/(h^2 + k^2)."""
        return self.h**2 / (self.h**2 + self.k**2)

    @property
    def receivers(self) -> tuple[int, ...]:
        return tuple(range(1, self.n_qubits))


class Estimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    stderr: float = Field(default=0.0, ge=0)
    shots: int = Field(default=0, ge=0)
    """Number of samples; 0 marks an exact value."""

    @classmethod
    def exact(cls, value: float) -> Estimate:
        return cls(mean=float(value), stderr=0.0, shots=0)

    @property
    def is_exact(self) -> bool:
        return self.shots == 0


def estimate_from_samples(values: np.ndarray | Sequence[float]) -> Estimate:
    """Mean and standard error (sample standard deviation / sqrt(shots)) of per-shot values."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EstimationError("Cannot estimate from zero samples")
    mean = float(values.mean())
    if values.size == 1 or np.all(values == values[0]):
        return Estimate(mean=mean, stderr=0.0, shots=int(values.size))
    stderr = float(values.std(ddof=1) / math.sqrt(values.size))
    return Estimate(mean=mean, stderr=stderr, shots=int(values.size))


def e0(h: float, k: float, convention: E0Convention | str = E0Convention.TABLE_CONSISTENT) -> float:
    """Injected energy: h^2/sqrt(h^2 + k^2) (table-consistent, default) or h^2/(h^2 + k^2) (as printed)."""
    if h < 0 or k < 0:
        raise ValueError(f"Weights must be non-negative, got h={h}, k={k}")
    if h == 0 and k == 0:
        raise ValueError("At least one of the weights h, k must be positive")
    norm2 = h**2 + k**2
    if E0Convention(convention) is E0Convention.TABLE_CONSISTENT:
        return h**2 / math.sqrt(norm2)
    return h**2 / norm2


# === Observables ===


class ObservableKind(str, Enum):
    LOCAL = "H_n"
    SUBSYSTEM = "H_sub"
    TOTAL = "H_total"


@dataclass(frozen=True)
class ObservableSpec:
    kind: ObservableKind
    qubits: tuple[int, ...]
    num_qubits: int
    label: str

    def __post_init__(self):
        for q in self.qubits:
            if not 0 <= q < self.num_qubits:
                raise InvalidQubitError(f"{self.label} refers to qubit {q} of a {self.num_qubits}-qubit model")

    @property
    def expansion(self) -> list[PauliString]:
        """`sum_i (I - Z_i)/2` over the covered qubits."""
        if not self.qubits:
            return []
        return [PauliString(0.5 * len(self.qubits))] + [PauliString(-0.5, ((q, "Z"),)) for q in self.qubits]

    @property
    def is_diagonal(self) -> bool:
        return all(term.is_diagonal for term in self.expansion)

    def eigenvalue(self, bits: Sequence[int]) -> float:
        """Value on a computational basis state: the number of excited covered qubits."""
        return float(sum(bits[q] for q in self.qubits))


def local_hamiltonian(n: int, num_qubits: int) -> ObservableSpec:
    return ObservableSpec(ObservableKind.LOCAL, (n,), num_qubits, f"H_{n}")


def subsystem_hamiltonian(m: int, num_qubits: int) -> ObservableSpec:
    """`H_sub(m) = sum_{i=m}^{N-1} H_i`; `H_sub(0)` covers every qubit."""
    if not 0 <= m <= num_qubits:
        raise InvalidQubitError(f"Subsystem index {m} out of range for {num_qubits} qubits")
    return ObservableSpec(ObservableKind.SUBSYSTEM, tuple(range(m, num_qubits)), num_qubits, f"H_sub_{m}")


def block_hamiltonian(qubits: Iterable[int], num_qubits: int, label: str = "") -> ObservableSpec:
    """Sum of local terms over an arbitrary set of qubits (e.g. the receivers still to be read out)."""
    qubits = tuple(sorted(qubits))
    return ObservableSpec(ObservableKind.SUBSYSTEM, qubits, num_qubits, label or "H_" + "+".join(map(str, qubits)))


def total_hamiltonian(num_qubits: int) -> ObservableSpec:
    return ObservableSpec(ObservableKind.TOTAL, tuple(range(num_qubits)), num_qubits, "H_total")


def exact_expectation(state: QuantumState, obs: ObservableSpec) -> float:
    if obs.num_qubits != state.num_qubits:
        raise InvalidQubitError(f"{obs.label} is defined on {obs.num_qubits} qubits, state has {state.num_qubits}")
    return sum((expectation_pauli(state, term) for term in obs.expansion), 0.0)


def estimate_from_counts(counts: Mapping[str, int], obs: ObservableSpec) -> Estimate:
    """Estimate a Z-diagonal observable from a histogram of bit strings (qubit 0 first)."""
    if not obs.is_diagonal:
        raise EstimationError(f"{obs.label} is not diagonal in the computational basis")
    if not counts or sum(counts.values()) == 0:
        raise EstimationError("Empty counts")
    shots = sum(counts.values())
    if shots < 2:
        raise EstimationError(f"Need at least 2 shots for a standard error, got {shots}")
    values, weights = [], []
    for bitstring, count in counts.items():
        if len(bitstring) != obs.num_qubits or set(bitstring) - {"0", "1"}:
            raise EstimationError(f"Outcome {bitstring!r} is not a {obs.num_qubits}-bit string")
        values.append(obs.eigenvalue([int(b) for b in bitstring]))
        weights.append(count)
    return estimate_from_samples(np.repeat(values, weights))


__all__ = [
    "E0Convention",
    "Estimate",
    "EstimationError",
    "ModelParams",
    "ObservableKind",
    "ObservableSpec",
    "PauliString",
    "block_hamiltonian",
    "e0",
    "estimate_from_counts",
    "estimate_from_samples",
    "exact_expectation",
    "local_hamiltonian",
    "subsystem_hamiltonian",
    "total_hamiltonian",
]
