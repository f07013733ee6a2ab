"""Applying gates, projective measurements and Pauli expectations on dense statevectors.

All functions return new `QuantumState` objects; inputs are never modified.
"""

from __future__ import annotations

import numpy as np

from wqet import RandomSource
from wqet.simulator.circuit import Circuit
from wqet.simulator.constants import PRUNE_THRESHOLD
from wqet.simulator.gates import (
    PAULI_MATRICES,
    Basis,
    Conditioned,
    ControlledUnitary,
    GateOp,
    Measure,
    Unitary1Q,
)
from wqet.simulator.pauli import PauliString
from wqet.simulator.state import (
    ClassicalRecord,
    QuantumState,
    SimulationError,
    check_qubit,
)
from wqet.utils.log import logger


class ZeroProbabilityBranchError(SimulationError):
    """Raised when sampling selects a measurement outcome of zero probability."""


def _apply_matrix(tensor: np.ndarray, matrix: np.ndarray, target: int, controls: tuple[int, ...] = ()) -> np.ndarray:
    out = tensor.copy()
    index = [slice(None)] * tensor.ndim
    for c in controls:
        index[c] = 1
    index = tuple(index)
    # slicing out the controls removes their axes, so the target axis shifts left
    axis = target - sum(1 for c in controls if c < target)
    block = np.tensordot(matrix, tensor[index], axes=([1], [axis]))
    out[index] = np.moveaxis(block, 0, axis)
    return out


def apply_unitary(state: QuantumState, matrix: np.ndarray, target: int, controls: tuple[int, ...] = ()) -> QuantumState:
    for qubit in (*controls, target):
        check_qubit(qubit, state.num_qubits)
    return QuantumState.from_tensor(_apply_matrix(state.tensor, matrix, target, tuple(controls)))


def project(state: QuantumState, qubit: int, basis: Basis | str, outcome: int) -> tuple[float, np.ndarray]:
    """Apply the projector for `outcome` without renormalising.

    Z basis: outcome 0 <-> |0><0|. X basis: outcome 0 <-> (1 + X)/2, outcome 1 <-> (1 - X)/2.
    Returns the Born probability and the projected (unnormalised) tensor.
    """
    check_qubit(qubit, state.num_qubits)
    tensor = state.tensor
    if Basis(basis) is Basis.Z:
        projected = np.zeros_like(tensor)
        index = [slice(None)] * tensor.ndim
        index[qubit] = outcome
        projected[tuple(index)] = tensor[tuple(index)]
    else:
        sign = 1 - 2 * outcome
        projected = 0.5 * (tensor + sign * np.flip(tensor, axis=qubit))
    probability = float(np.vdot(projected, projected).real)
    return probability, projected


def branch_probabilities(state: QuantumState, qubit: int, basis: Basis | str) -> tuple[float, float]:
    """Born probabilities of outcomes 0 and 1, with values below the prune threshold snapped to 0 or 1."""
    p0, _ = project(state, qubit, basis, 0)
    p0 = min(max(p0, 0.0), 1.0)
    if p0 < PRUNE_THRESHOLD:
        p0 = 0.0
    elif p0 > 1.0 - PRUNE_THRESHOLD:
        p0 = 1.0
    return p0, 1.0 - p0


def collapse(state: QuantumState, qubit: int, basis: Basis | str, outcome: int) -> tuple[float, QuantumState]:
    """Project onto `outcome` and renormalise. Returns the branch probability and the collapsed state."""
    probability, projected = project(state, qubit, basis, outcome)
    if probability < PRUNE_THRESHOLD:
        raise ZeroProbabilityBranchError(
            f"Outcome {outcome} of a {Basis(basis).value}-measurement on qubit {qubit} has probability {probability:.3e}"
        )
    return probability, QuantumState.from_tensor(projected / np.sqrt(probability))


def measure_projective(
    state: QuantumState, qubit: int, basis: Basis | str, rng: RandomSource
) -> tuple[int, QuantumState]:
    p0, _ = branch_probabilities(state, qubit, basis)
    outcome = 0 if rng.random() < p0 else 1
    _, collapsed = collapse(state, qubit, basis, outcome)
    return outcome, collapsed


def apply_gate(
    state: QuantumState, gate: GateOp, record: ClassicalRecord, rng: RandomSource | None = None
) -> QuantumState:
    """Apply one operation. Measurements write their outcome into `record`."""
    gate.validate(state.num_qubits)
    if isinstance(gate, Unitary1Q):
        return apply_unitary(state, gate.matrix, gate.target)
    if isinstance(gate, ControlledUnitary):
        return apply_unitary(state, gate.matrix, gate.target, gate.controls)
    if isinstance(gate, Measure):
        if rng is None:
            raise SimulationError(f"Measuring qubit {gate.target} requires a random source")
        outcome, state = measure_projective(state, gate.target, gate.basis, rng)
        record.set(gate.bit, outcome)
        return state
    if isinstance(gate, Conditioned):
        if record.get(gate.bit) == gate.value:
            return apply_gate(state, gate.inner, record, rng)
        return state
    raise SimulationError(f"Unknown gate operation {gate!r}")


def run_circuit(
    circuit: Circuit,
    rng: RandomSource | None = None,
    *,
    initial_state: QuantumState | None = None,
    record: ClassicalRecord | None = None,
) -> tuple[QuantumState, ClassicalRecord]:
    state = initial_state if initial_state is not None else QuantumState.zero(circuit.num_qubits)
    if state.num_qubits != circuit.num_qubits:
        raise SimulationError(f"Circuit acts on {circuit.num_qubits} qubits, state has {state.num_qubits}")
    record = record if record is not None else ClassicalRecord()
    for op in circuit:
        state = apply_gate(state, op, record, rng)
    logger.debug(f"Ran {circuit!r}, record {record.bits}")
    return state, record


def apply_pauli(state: QuantumState, pauli: PauliString) -> np.ndarray:
    """`P|psi>` as a tensor, excluding the coefficient."""
    if pauli.max_qubit >= state.num_qubits:
        raise SimulationError(f"{pauli} acts outside a {state.num_qubits}-qubit state")
    tensor = state.tensor
    for qubit, name in pauli.factors:
        if name != "I":
            tensor = _apply_matrix(tensor, PAULI_MATRICES[name], qubit)
    return tensor


def expectation_pauli(state: QuantumState, pauli: PauliString) -> float:
    value = pauli.coefficient * np.vdot(state.amplitudes, apply_pauli(state, pauli).reshape(-1))
    return float(value.real)
