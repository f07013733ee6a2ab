"""Multi-receiver energy teleportation over a W-state register.

Qubit 0 (the sender) is measured in the X basis, which injects energy; the sign `mu` is broadcast
and every receiver applies `Z` when `mu = -1`; receivers are then read out in the Z basis one after
the other, followed by a final Z-readout of the sender.
"""

from __future__ import annotations

import concurrent.futures
from collections.abc import Sequence

import numpy as np

from wqet import RandomSource
from wqet.circuits import build_initial_state
from wqet.observables import (
    Estimate,
    block_hamiltonian,
    e0,
    estimate_from_samples,
    exact_expectation,
    local_hamiltonian,
    total_hamiltonian,
)
from wqet.oracle.branches import enumerate_branches, exact_averaged_expectation
from wqet.protocol.ledger import EnergyLedger, ProtocolConfig, ShotRecord
from wqet.simulator.circuit import Circuit
from wqet.simulator.engine import apply_unitary, measure_projective, run_circuit
from wqet.simulator.gates import Z, Basis, conditioned, gate, measure
from wqet.simulator.rng import RngStream
from wqet.simulator.state import QuantumState
from wqet.utils.log import logger

SENDER = 0
MU_BIT = "mu"
SENDER_Z_BIT = "alice_z"


def receiver_bit(qubit: int) -> str:
    return f"r{qubit}"


def build_qet_circuit(config: ProtocolConfig) -> Circuit:
    """The whole protocol as one circuit (used by the oracle and for the text dump)."""
    params = config.params
    circuit = build_initial_state(params.n_qubits, params.h, params.k, config.prep)
    circuit.append(measure(SENDER, MU_BIT, Basis.X))
    if config.feedforward:
        for receiver in config.receiver_order:
            circuit.append(conditioned(MU_BIT, 1, gate("z", receiver)))
    for receiver in config.receiver_order:
        circuit.append(measure(receiver, receiver_bit(receiver)))
    circuit.append(measure(SENDER, SENDER_Z_BIT))
    return circuit


def prepare_state(config: ProtocolConfig) -> QuantumState:
    params = config.params
    state, _ = run_circuit(build_initial_state(params.n_qubits, params.h, params.k, config.prep))
    return state


def inject(state: QuantumState, rng: RandomSource) -> tuple[int, QuantumState]:
    """X-measurement of the sender. Returns `mu = +1` for the (1 + X)/2 branch, else -1."""
    outcome, state = measure_projective(state, SENDER, Basis.X, rng)
    return 1 - 2 * outcome, state


def feedforward(state: QuantumState, mu: int, receivers: Sequence[int]) -> QuantumState:
    if mu not in (1, -1):
        raise ValueError(f"mu must be +1 or -1, got {mu}")
    if mu == 1:
        return state
    for receiver in receivers:
        state = apply_unitary(state, Z, receiver)
    return state


def harvest(state: QuantumState, receiver_order: Sequence[int], rng: RandomSource, *, mu: int = 1) -> ShotRecord:
    """Z-readout of the receivers in `receiver_order`, then of the sender."""
    if len(set(receiver_order)) != len(receiver_order):
        raise ValueError(f"Receiver order {tuple(receiver_order)} repeats a receiver")
    outcomes = {}
    for receiver in receiver_order:
        outcomes[receiver], state = measure_projective(state, receiver, Basis.Z, rng)
    alice_z, _ = measure_projective(state, SENDER, Basis.Z, rng)
    return ShotRecord(mu=mu, receivers=outcomes, alice_z=alice_z)


def run_shot(prepared: QuantumState, config: ProtocolConfig, index: int) -> ShotRecord:
    rng = RngStream(config.seed, index)
    mu, state = inject(prepared, rng)
    if config.feedforward:
        state = feedforward(state, mu, config.receiver_order)
    return harvest(state, config.receiver_order, rng, mu=mu)


def _position_values(config: ProtocolConfig, bits: np.ndarray) -> list[np.ndarray]:
    """Per-shot `H_sub` readings for every readout position."""
    order = list(config.receiver_order)
    return [bits[:, order[j:]].sum(axis=1) for j in range(len(order))]


def run_protocol(config: ProtocolConfig) -> EnergyLedger:
    """Sample `config.shots` independent executions; shots are split into contiguous blocks per worker."""
    n = config.n_qubits
    prepared = prepare_state(config)
    bits = np.zeros((config.shots, n), dtype=np.int8)
    mus = np.zeros(config.shots, dtype=np.int8)

    def run_block(indices: np.ndarray) -> None:
        for i in indices:
            shot = run_shot(prepared, config, int(i))
            bits[i] = shot.bits(n)
            mus[i] = shot.mu

    blocks = [block for block in np.array_split(np.arange(config.shots), config.workers) if block.size]
    logger.info(f"Sampling {config.shots} shots for N={n}, h={config.params.h}, k={config.params.k}")
    logger.debug(f"{len(blocks)} shot blocks on {config.workers} worker(s)")
    with concurrent.futures.ThreadPoolExecutor(max_workers=config.workers) as executor:
        futures = [executor.submit(run_block, block) for block in blocks]
        for future in futures:
            future.result()

    h_sub_values = _position_values(config, bits)
    harvested = [
        h_sub_values[j] - (h_sub_values[j + 1] if j + 1 < len(h_sub_values) else 0) for j in range(len(h_sub_values))
    ]
    return EnergyLedger(
        mode="sampled",
        receiver_order=config.receiver_order,
        feedforward=config.feedforward,
        e0=e0(config.params.h, config.params.k, config.e0_convention),
        h_total_pre=exact_expectation(prepared, total_hamiltonian(n)),
        h_total_post=estimate_from_samples(bits.sum(axis=1)),
        h_sub=[estimate_from_samples(values) for values in h_sub_values],
        local=[estimate_from_samples(bits[:, q]) for q in range(n)],
        harvested=[estimate_from_samples(values) for values in harvested],
        mu_plus=estimate_from_samples(mus == 1),
    )


def run_protocol_exact(config: ProtocolConfig) -> EnergyLedger:
    """Exact ledger from the branch oracle; every stderr is zero."""
    n = config.n_qubits
    order = config.receiver_order
    dist = enumerate_branches(build_qet_circuit(config))

    def exact(obs) -> Estimate:
        return Estimate.exact(exact_averaged_expectation(dist, obs))

    h_sub = [exact(block_hamiltonian(order[j:], n, f"H_sub_{j + 1}")) for j in range(len(order))]
    harvested = [
        Estimate.exact(h_sub[j].mean - (h_sub[j + 1].mean if j + 1 < len(h_sub) else 0.0)) for j in range(len(h_sub))
    ]
    return EnergyLedger(
        mode="exact",
        receiver_order=order,
        feedforward=config.feedforward,
        e0=e0(config.params.h, config.params.k, config.e0_convention),
        h_total_pre=exact_expectation(prepare_state(config), total_hamiltonian(n)),
        h_total_post=exact(total_hamiltonian(n)),
        h_sub=h_sub,
        local=[exact(local_hamiltonian(q, n)) for q in range(n)],
        harvested=harvested,
        mu_plus=Estimate.exact(dist.probability_of(MU_BIT, 0)),
    )
