"""Reduced density matrices and the two-qubit partial-transpose test."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from wqet.simulator.constants import PROBABILITY_ATOL, PRUNE_THRESHOLD, WITNESS_THRESHOLD
from wqet.simulator.engine import collapse, project
from wqet.simulator.gates import Basis
from wqet.simulator.state import InvalidQubitError, QuantumState, SimulationError, check_qubit


@dataclass(frozen=True, eq=False)
class ReducedState:
    kept: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        rho = self.matrix
        if not np.allclose(rho, rho.conj().T, atol=PROBABILITY_ATOL, rtol=0):
            raise SimulationError("Reduced state is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > PROBABILITY_ATOL:
            raise SimulationError(f"Reduced state has trace {np.trace(rho).real:.15f}")
        if np.linalg.eigvalsh(rho).min() < -PROBABILITY_ATOL:
            raise SimulationError("Reduced state has a negative eigenvalue")

    @property
    def num_qubits(self) -> int:
        return len(self.kept)

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def expectation(self, operator: np.ndarray) -> float:
        """`Tr(rho O)` for an operator on the kept qubits (ordered as in `kept`)."""
        return float(np.trace(self.matrix @ operator).real)


def reduced_state(state: QuantumState, keep: list[int] | tuple[int, ...]) -> ReducedState:
    """Partial trace over every qubit not in `keep`; kept qubits appear in the listed order."""
    keep = tuple(keep)
    if not keep:
        raise InvalidQubitError("Keep at least one qubit")
    if len(set(keep)) != len(keep):
        raise InvalidQubitError(f"Duplicate qubits in {keep}")
    for q in keep:
        check_qubit(q, state.num_qubits)
    traced = [q for q in range(state.num_qubits) if q not in keep]
    psi = np.transpose(state.tensor, (*keep, *traced)).reshape(2 ** len(keep), -1)
    return ReducedState(keep, psi @ psi.conj().T)


def partial_transpose_min_eigenvalue(red: ReducedState) -> float:
    if red.num_qubits != 2:
        raise InvalidQubitError(f"The partial-transpose test needs a two-qubit state, got {red.num_qubits} qubits")
    # rho[a b, a' b'] -> rho[a b', a' b]
    transposed = red.matrix.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    return float(np.linalg.eigvalsh(transposed).min())


def entanglement_witness(red: ReducedState) -> tuple[float, bool]:
    """Purity and whether the pair is entangled (negative partial transpose)."""
    return red.purity, partial_transpose_min_eigenvalue(red) < WITNESS_THRESHOLD


@dataclass(frozen=True)
class PairWitness:
    pair: tuple[int, int]
    purity: float
    entangled: bool


def measurement_robustness(
    state: QuantumState, measured: int, basis: Basis | str = Basis.Z
) -> dict[int, list[PairWitness]]:
    """Measure one qubit and test every remaining pair on each non-zero outcome branch."""
    remaining = [q for q in range(state.num_qubits) if q != measured]
    result: dict[int, list[PairWitness]] = {}
    for outcome in (0, 1):
        probability, _ = project(state, measured, basis, outcome)
        if probability < PRUNE_THRESHOLD:
            continue
        _, branch_state = collapse(state, measured, basis, outcome)
        witnesses = []
        for pair in combinations(remaining, 2):
            purity, entangled = entanglement_witness(reduced_state(branch_state, pair))
            witnesses.append(PairWitness(pair, purity, entangled))
        result[outcome] = witnesses
    return result
