"""Exhaustive enumeration of measurement branches.

Every measurement splits the current branch into its (at most two) outcomes, weighted by the
Born probabilities; branches below the prune threshold are dropped. Outcome 0 is always expanded
before outcome 1, which fixes a canonical branch order.
"""

from __future__ import annotations

from dataclasses import dataclass

from wqet.observables import ObservableSpec, exact_expectation
from wqet.simulator.circuit import Circuit
from wqet.simulator.constants import MAX_BRANCH_MEASUREMENTS, PROBABILITY_ATOL, PRUNE_THRESHOLD
from wqet.simulator.engine import apply_gate, project
from wqet.simulator.gates import Measure
from wqet.simulator.state import ClassicalRecord, QuantumState, SimulationError
from wqet.utils.log import logger


class BranchCapExceeded(SimulationError):
    """Raised when a circuit has too many measurements to enumerate exhaustively."""


@dataclass(frozen=True, eq=False)
class Branch:
    outcomes: dict[str, int]
    probability: float
    state: QuantumState


@dataclass(frozen=True, eq=False)
class BranchDistribution:
    branches: tuple[Branch, ...]

    def __post_init__(self):
        total = self.total_probability
        if abs(total - 1.0) > PROBABILITY_ATOL:
            raise SimulationError(f"Branch probabilities sum to {total:.15f}, expected 1")

    @property
    def total_probability(self) -> float:
        return sum(branch.probability for branch in self.branches)

    def __len__(self) -> int:
        return len(self.branches)

    def probability_of(self, bit: str, value: int) -> float:
        """Marginal probability that classical bit `bit` reads `value`."""
        return sum(branch.probability for branch in self.branches if branch.outcomes.get(bit) == value)

    def outcome_distribution(self, bits: list[str]) -> dict[tuple[int, ...], float]:
        """Joint distribution of the listed classical bits."""
        distribution: dict[tuple[int, ...], float] = {}
        for branch in self.branches:
            key = tuple(branch.outcomes[bit] for bit in bits)
            distribution[key] = distribution.get(key, 0.0) + branch.probability
        return distribution


def enumerate_branches(circuit: Circuit, initial_state: QuantumState | None = None) -> BranchDistribution:
    if circuit.measurement_count > MAX_BRANCH_MEASUREMENTS:
        raise BranchCapExceeded(
            f"Circuit has {circuit.measurement_count} measurements, at most {MAX_BRANCH_MEASUREMENTS} can be enumerated"
        )
    state = initial_state if initial_state is not None else QuantumState.zero(circuit.num_qubits)
    ops = circuit.ops
    finished: list[Branch] = []
    # depth-first; the stack holds (next op index, state, record, probability)
    stack = [(0, state, ClassicalRecord(), 1.0)]
    while stack:
        position, state, record, probability = stack.pop()
        while position < len(ops) and not isinstance(ops[position], Measure):
            state = apply_gate(state, ops[position], record)
            position += 1
        if position == len(ops):
            finished.append(Branch(dict(record.bits), probability, state))
            continue
        op = ops[position]
        children = []
        for outcome in (0, 1):
            p, projected = project(state, op.target, op.basis, outcome)
            if p * probability < PRUNE_THRESHOLD:
                continue
            child_record = record.copy()
            child_record.set(op.bit, outcome)
            children.append((position + 1, QuantumState.from_tensor(projected / p**0.5), child_record, probability * p))
        stack.extend(reversed(children))
    # pruning removes at most a few 1e-14 of weight; fold it back so probabilities stay exact sums
    total = sum(branch.probability for branch in finished)
    branches = tuple(Branch(b.outcomes, b.probability / total, b.state) for b in finished)
    logger.debug(f"Enumerated {len(branches)} branches of {circuit!r}")
    return BranchDistribution(branches)


def exact_averaged_expectation(dist: BranchDistribution, obs: ObservableSpec) -> float:
    """`sum_b p_b <obs>_b` over all branches."""
    return sum((branch.probability * exact_expectation(branch.state, obs) for branch in dist.branches), 0.0)
