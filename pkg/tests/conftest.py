import math
import os

os.environ.setdefault("WQET_SILENT_STARTUP", "1")

import numpy as np
import pytest

from wqet.circuits import build_ghz, build_w_distribution
from wqet.observables import ModelParams
from wqet.protocol import ProtocolConfig
from wqet.simulator import QuantumState, run_circuit

PUBLISHED_POINTS = [(n, h, k) for n in (3, 4, 5) for h, k in ((2.0, 1.0), (1.0, 1.0))]
"""The published (N, h, k) configurations."""


def w_state(n: int) -> QuantumState:
    amplitudes = np.zeros(2**n, dtype=complex)
    for q in range(n):
        amplitudes[1 << (n - 1 - q)] = 1 / math.sqrt(n)
    return QuantumState(amplitudes)


def random_state(n: int, rng: np.random.Generator) -> QuantumState:
    amplitudes = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return QuantumState(amplitudes / np.linalg.norm(amplitudes))


def ghz_state(n: int) -> QuantumState:
    state, _ = run_circuit(build_ghz(n))
    return state


def prepared_w_state(n: int) -> QuantumState:
    """`|W_n>` obtained by running the distribution circuit on `|10...0>`."""
    state, _ = run_circuit(build_w_distribution(n), initial_state=QuantumState.basis("1" + "0" * (n - 1)))
    return state


def make_config(n_qubits: int = 3, h: float = 1.0, k: float = 1.0, **kwargs) -> ProtocolConfig:
    return ProtocolConfig(params=ModelParams(n_qubits=n_qubits, h=h, k=k), **kwargs)


def receiver_energy(n_qubits: int, h: float, k: float) -> float:
    """Exact local energy of every receiver after injection."""
    return h**2 / (n_qubits * (h**2 + k**2))


@pytest.fixture
def w3() -> QuantumState:
    return w_state(3)


@pytest.fixture
def config_3_11() -> ProtocolConfig:
    return make_config(3, 1.0, 1.0, shots=2000, seed=7)


@pytest.fixture(params=PUBLISHED_POINTS, ids=lambda p: f"N{p[0]}-h{p[1]:g}-k{p[2]:g}")
def published_point(request) -> tuple[int, float, float]:
    return request.param
