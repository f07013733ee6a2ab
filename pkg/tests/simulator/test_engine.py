import math

import numpy as np
import pytest

from tests.conftest import w_state
from wqet.circuits import build_initial_state
from wqet.simulator import (
    Basis,
    Circuit,
    ClassicalRecord,
    InvalidQubitError,
    PauliString,
    QuantumState,
    RngStream,
    ZeroProbabilityBranchError,
    apply_gate,
    apply_unitary,
    collapse,
    conditioned,
    controlled,
    expectation_pauli,
    gate,
    measure,
    measure_projective,
    run_circuit,
)
from wqet.simulator.engine import branch_probabilities
from wqet.simulator.gates import H, NonUnitaryError, custom, ry_matrix


def test_hadamard_on_zero():
    state = apply_unitary(QuantumState.zero(1), H, 0)
    assert np.allclose(state.amplitudes, [1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_controlled_gate_only_acts_on_control_one():
    state = apply_gate(QuantumState.basis("10"), controlled("x", 0, 1), ClassicalRecord())
    assert state.amplitude("11") == pytest.approx(1)
    state = apply_gate(QuantumState.basis("00"), controlled("x", 0, 1), ClassicalRecord())
    assert state.amplitude("00") == pytest.approx(1)


def test_controlled_gate_with_control_after_target():
    # target axis must not shift when the control sits to its right
    state = apply_gate(QuantumState.basis("001"), controlled("x", 2, 0), ClassicalRecord())
    assert state.amplitude("101") == pytest.approx(1)


def test_multi_controlled_gate():
    op = controlled("x", (0, 2), 1)
    assert apply_gate(QuantumState.basis("101"), op, ClassicalRecord()).amplitude("111") == pytest.approx(1)
    assert apply_gate(QuantumState.basis("100"), op, ClassicalRecord()).amplitude("100") == pytest.approx(1)


def test_gate_index_out_of_range():
    with pytest.raises(InvalidQubitError):
        apply_gate(QuantumState.zero(2), gate("x", 2), ClassicalRecord())


def test_non_unitary_matrix_rejected():
    with pytest.raises(NonUnitaryError):
        custom(np.array([[1, 1], [0, 1]]), 0)


def test_random_unitaries_preserve_norm():
    rng = np.random.default_rng(3)
    state = QuantumState.zero(4)
    for _ in range(50):
        theta = rng.uniform(0, 2 * math.pi)
        target, control = rng.choice(4, size=2, replace=False)
        state = apply_unitary(state, ry_matrix(theta), int(target), (int(control),))
        state = apply_unitary(state, H, int(control))
    assert abs(state.norm() - 1) <= 1e-10


def test_x_measurement_of_plus_state_is_deterministic():
    plus = apply_unitary(QuantumState.zero(1), H, 0)
    outcome, collapsed = measure_projective(plus, 0, Basis.X, RngStream(0))
    assert outcome == 0
    assert collapsed.equals_up_to_phase(plus)


def test_x_measurement_of_zero_is_fair():
    p0, p1 = branch_probabilities(QuantumState.zero(1), 0, Basis.X)
    assert p0 == pytest.approx(0.5) and p1 == pytest.approx(0.5)


def test_z_measurement_of_w3_collapses_to_w2(w3):
    probability, collapsed = collapse(w3, 1, Basis.Z, 0)
    assert probability == pytest.approx(2 / 3)
    expected = np.zeros(8, dtype=complex)
    expected[0b100] = expected[0b001] = 1 / math.sqrt(2)
    assert collapsed.equals_up_to_phase(QuantumState(expected))


@pytest.mark.parametrize("basis", [Basis.Z, Basis.X])
def test_born_probabilities_sum_to_one(basis):
    state, _ = run_circuit(build_initial_state(4, 2.0, 1.0))
    for qubit in range(4):
        p0, p1 = branch_probabilities(state, qubit, basis)
        assert abs(p0 + p1 - 1) <= 1e-12


@pytest.mark.parametrize("basis", [Basis.Z, Basis.X])
def test_measurement_is_idempotent(basis):
    state, _ = run_circuit(build_initial_state(3, 1.0, 1.0))
    rng = RngStream(11)
    for qubit in range(3):
        outcome, collapsed = measure_projective(state, qubit, basis, rng)
        p0, _ = branch_probabilities(collapsed, qubit, basis)
        assert p0 == (1.0 if outcome == 0 else 0.0)


def test_zero_probability_branch():
    with pytest.raises(ZeroProbabilityBranchError):
        collapse(QuantumState.zero(1), 0, Basis.Z, 1)


def test_born_frequency_matches_probability():
    theta = 2 * math.asin(math.sqrt(0.2))
    state = apply_unitary(QuantumState.zero(1), ry_matrix(theta), 0)
    stream = RngStream(2024)
    ones = sum(measure_projective(state, 0, Basis.Z, stream)[0] for _ in range(100_000))
    assert abs(ones / 100_000 - 0.2) <= 0.004


def test_empty_circuit():
    state, record = run_circuit(Circuit(3))
    assert state.amplitude("000") == 1
    assert record.bits == {}


def test_feedforward_copies_measured_bit():
    circuit = Circuit(2, [gate("h", 0), measure(0, "b0"), conditioned("b0", 1, gate("x", 1))])
    for seed in range(20):
        state, record = run_circuit(circuit, RngStream(seed))
        expected = f"{record.get('b0')}{record.get('b0')}"
        assert abs(state.amplitude(expected)) == pytest.approx(1)


def test_measurement_needs_random_source():
    with pytest.raises(ValueError):
        run_circuit(Circuit(1, [measure(0, "b")]))


def test_seed_determinism():
    circuit = Circuit(3, [gate("h", 0), gate("h", 1), gate("h", 2), measure(0, "a"), measure(1, "b"), measure(2, "c")])
    records = [run_circuit(circuit, RngStream(99, 5))[1].bits for _ in range(2)]
    assert records[0] == records[1]


def test_pauli_expectations(w3):
    assert expectation_pauli(QuantumState.zero(1), PauliString.parse("Z0")) == pytest.approx(1.0)
    for q in range(3):
        assert expectation_pauli(w3, PauliString.parse(f"Z{q}")) == pytest.approx(1 / 3)
    bell = QuantumState(np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert expectation_pauli(bell, PauliString.parse("X0 X1")) == pytest.approx(1.0)


def test_pauli_out_of_range():
    with pytest.raises(ValueError):
        expectation_pauli(w_state(2), PauliString.parse("Z2"))
