from __future__ import annotations

from dataclasses import dataclass

from wqet.simulator.state import InvalidQubitError, SimulationError


@dataclass(frozen=True)
class PauliString:
    """`coefficient * P_q1 ⊗ P_q2 ⊗ ...`; qubits not listed carry the identity."""

    coefficient: float
    factors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        factors = tuple((int(q), str(p).upper()) for q, p in self.factors)
        qubits = [q for q, _ in factors]
        if len(set(qubits)) != len(qubits):
            raise SimulationError(f"At most one factor per qubit, got {self.factors}")
        for q, p in factors:
            if p not in "IXYZ" or len(p) != 1:
                raise SimulationError(f"Unknown Pauli operator {p!r}")
            if q < 0:
                raise InvalidQubitError(f"Negative qubit index {q}")
        object.__setattr__(self, "factors", tuple(sorted(factors)))

    @classmethod
    def parse(cls, text: str, coefficient: float = 1.0) -> PauliString:
        """`"X0 Z2"` -> X on qubit 0 and Z on qubit 2."""
        return cls(coefficient, tuple((int(token[1:]), token[0]) for token in text.split()))

    @property
    def is_diagonal(self) -> bool:
        return all(p in "IZ" for _, p in self.factors)

    @property
    def z_qubits(self) -> tuple[int, ...]:
        return tuple(q for q, p in self.factors if p == "Z")

    @property
    def max_qubit(self) -> int:
        return max((q for q, _ in self.factors), default=-1)

    def __str__(self) -> str:
        body = " ".join(f"{p}{q}" for q, p in self.factors) or "I"
        return f"{self.coefficient:+g}*{body}"
