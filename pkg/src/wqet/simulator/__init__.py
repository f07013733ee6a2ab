"""Dense statevector simulation with mid-circuit measurement and classical feedforward."""

from wqet.simulator.circuit import Circuit, CircuitFormatError
from wqet.simulator.engine import (
    ZeroProbabilityBranchError,
    apply_gate,
    apply_unitary,
    collapse,
    expectation_pauli,
    measure_projective,
    run_circuit,
)
from wqet.simulator.gates import Basis, GateOp, NonUnitaryError, conditioned, controlled, gate, measure
from wqet.simulator.pauli import PauliString
from wqet.simulator.rng import RngStream
from wqet.simulator.state import (
    ClassicalRecord,
    InvalidQubitError,
    QuantumState,
    SimulationError,
    TooManyQubitsError,
    UnsetClassicalBitError,
)

__all__ = [
    "Basis",
    "Circuit",
    "CircuitFormatError",
    "ClassicalRecord",
    "GateOp",
    "InvalidQubitError",
    "NonUnitaryError",
    "PauliString",
    "QuantumState",
    "RngStream",
    "SimulationError",
    "TooManyQubitsError",
    "UnsetClassicalBitError",
    "ZeroProbabilityBranchError",
    "apply_gate",
    "apply_unitary",
    "collapse",
    "conditioned",
    "controlled",
    "expectation_pauli",
    "gate",
    "measure",
    "measure_projective",
    "run_circuit",
]
