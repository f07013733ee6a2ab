from wqet.simulator.circuit import Circuit
from wqet.simulator.gates import controlled, gate


class CircuitSizeError(ValueError):
    """Raised when a builder is asked for a register it cannot prepare."""


def build_ghz(n: int) -> Circuit:
    """`(|0...0> + |1...1>)/sqrt(2)`: Hadamard on qubit 0, then a CNOT chain."""
    if n < 2:
        raise CircuitSizeError(f"A GHZ state needs at least 2 qubits, got {n}")
    circuit = Circuit(n, [gate("h", 0)])
    for i in range(n - 1):
        circuit.append(controlled("x", i, i + 1))
    return circuit
