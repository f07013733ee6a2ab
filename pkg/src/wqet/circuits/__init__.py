"""Entanglement-preparation circuits: W-state distribution, the weighted initial superposition and GHZ."""

import importlib
import math
from collections.abc import Callable
from enum import Enum

from wqet.circuits.ghz import CircuitSizeError, build_ghz
from wqet.simulator.circuit import Circuit
from wqet.simulator.gates import gate


class PrepStrategy(str, Enum):
    LINEAR = "linear"
    LOG = "log"


_PREP_MAPPING = {
    "linear": "wqet.circuits.w_state.linear_cascade",
    "log": "wqet.circuits.w_state.log_depth_tree",
}


def get_prep_builder(spec: PrepStrategy | str) -> Callable[[int], Circuit]:
    """Resolve a strategy name (or a full import path to a builder function)."""
    spec = spec.value if isinstance(spec, PrepStrategy) else spec
    full_path = _PREP_MAPPING.get(spec, spec)
    try:
        module_name, function_name = full_path.rsplit(".", 1)
        module = importlib.import_module(module_name)
        return getattr(module, function_name)
    except (ValueError, ImportError, AttributeError):
        msg = f"Unknown preparation strategy: {spec} (resolved to {full_path}, available: {_PREP_MAPPING})"
        raise ValueError(msg)


def build_w_distribution(n: int, strategy: PrepStrategy | str = PrepStrategy.LOG) -> Circuit:
    if n < 1:
        raise CircuitSizeError(f"W distribution needs at least 1 qubit, got {n}")
    return get_prep_builder(strategy)(n)


def initial_angle(h: float, k: float) -> float:
    return 2 * math.atan2(h, k)


def build_initial_state(n: int, h: float, k: float, strategy: PrepStrategy | str = PrepStrategy.LOG) -> Circuit:
    """`(k|0...0> + h|W_n>)/sqrt(h^2 + k^2)` from `|0...0>`."""
    if h < 0 or k < 0:
        raise ValueError(f"Weights must be non-negative, got h={h}, k={k}")
    if h == 0 and k == 0:
        raise ValueError("At least one of the weights h, k must be positive")
    return Circuit(n, [gate("ry", 0, theta=initial_angle(h, k))]) + build_w_distribution(n, strategy)


__all__ = [
    "CircuitSizeError",
    "PrepStrategy",
    "build_ghz",
    "build_initial_state",
    "build_w_distribution",
    "get_prep_builder",
    "initial_angle",
]
