"""Consistency checks on the protocol: translational and exchange symmetry of the receivers.

Translational symmetry is checked as equality of every receiver's local energy after injection.
Exchange symmetry reruns the protocol with a different readout order and compares what each
receiver harvests (attributed to the receiver, not to the readout position).
"""

from __future__ import annotations

import math
from enum import Enum
from itertools import combinations, permutations

import numpy as np
from pydantic import BaseModel, Field, computed_field

from wqet.observables import Estimate
from wqet.protocol import EnergyLedger, LedgerMode, ProtocolConfig, get_ledger_runner
from wqet.simulator.constants import PROBABILITY_ATOL
from wqet.utils.log import logger


class DegenerateSymmetryTestError(ValueError):
    """Raised when a symmetry test has fewer than two receivers to compare."""


class ReceiverSetMismatchError(ValueError):
    """Raised when two readout orders do not cover the same receivers."""


class SymmetryKind(str, Enum):
    TRANSLATIONAL = "translational"
    EXCHANGE = "exchange"


class SymmetrySettings(BaseModel):
    exact_threshold: float = PROBABILITY_ATOL
    sampled_sigma: float = 5.0
    max_exchange_pairs: int = Field(default=20, ge=1)
    pair_seed: int = 0


class SymmetryReport(BaseModel):
    kind: SymmetryKind
    mode: LedgerMode
    n_qubits: int
    h: float
    k: float
    max_deviation: float
    threshold: float
    orders: list[tuple[int, ...]] = []

    @computed_field
    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.threshold


def _compare(pairs: list[tuple[Estimate, Estimate]], mode: LedgerMode, settings: SymmetrySettings) -> tuple[float, float]:
    """Largest deviation over the pairs and the threshold it is held to."""
    max_deviation = max(abs(a.mean - b.mean) for a, b in pairs)
    if mode is LedgerMode.EXACT:
        return max_deviation, settings.exact_threshold
    combined = max(math.sqrt(a.stderr**2 + b.stderr**2) for a, b in pairs)
    return max_deviation, settings.sampled_sigma * combined


def translational_test(
    config: ProtocolConfig,
    mode: LedgerMode | str = LedgerMode.EXACT,
    settings: SymmetrySettings | None = None,
    *,
    ledger: EnergyLedger | None = None,
) -> SymmetryReport:
    """Every receiver's local energy must agree after injection. Pass `ledger` to reuse a run."""
    mode = LedgerMode(mode)
    settings = settings or SymmetrySettings()
    if config.n_qubits < 3:
        raise DegenerateSymmetryTestError(f"Translational test needs at least 2 receivers, got N={config.n_qubits}")
    ledger = ledger or get_ledger_runner(mode)(config)
    local = [ledger.local[q] for q in config.params.receivers]
    max_deviation, threshold = _compare(list(combinations(local, 2)), mode, settings)
    report = SymmetryReport(
        kind=SymmetryKind.TRANSLATIONAL,
        mode=mode,
        n_qubits=config.n_qubits,
        h=config.params.h,
        k=config.params.k,
        max_deviation=max_deviation,
        threshold=threshold,
        orders=[config.receiver_order],
    )
    logger.debug(f"Translational test ({mode.value}) N={config.n_qubits}: {max_deviation:.3e} <= {threshold:.3e}")
    return report


def exchange_test(
    config: ProtocolConfig,
    order_a: tuple[int, ...] | list[int],
    order_b: tuple[int, ...] | list[int],
    mode: LedgerMode | str = LedgerMode.EXACT,
    settings: SymmetrySettings | None = None,
) -> SymmetryReport:
    """Run the protocol under both readout orders (same seed) and compare the ledgers per receiver."""
    mode = LedgerMode(mode)
    settings = settings or SymmetrySettings()
    receivers = sorted(config.params.receivers)
    if sorted(order_a) != receivers or sorted(order_b) != receivers:
        raise ReceiverSetMismatchError(f"Orders {tuple(order_a)} and {tuple(order_b)} must both permute {receivers}")
    runner = get_ledger_runner(mode)
    ledger_a = runner(config.with_order(order_a))
    ledger_b = runner(config.with_order(order_b))
    harvested_a, harvested_b = ledger_a.harvested_by_receiver(), ledger_b.harvested_by_receiver()
    pairs = [(ledger_a.h_total_post, ledger_b.h_total_post), (ledger_a.mu_plus, ledger_b.mu_plus)]
    pairs += [(harvested_a[r], harvested_b[r]) for r in receivers]
    pairs += list(zip(ledger_a.local, ledger_b.local))
    max_deviation, threshold = _compare(pairs, mode, settings)
    return SymmetryReport(
        kind=SymmetryKind.EXCHANGE,
        mode=mode,
        n_qubits=config.n_qubits,
        h=config.params.h,
        k=config.params.k,
        max_deviation=max_deviation,
        threshold=threshold,
        orders=[tuple(order_a), tuple(order_b)],
    )


def permutation_pairs(
    receivers: tuple[int, ...] | list[int], max_pairs: int = 20, seed: int = 0
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All unordered pairs of readout orders for up to three receivers, else `max_pairs` seeded samples."""
    orders = list(permutations(sorted(receivers)))
    pairs = list(combinations(orders, 2))
    if len(receivers) <= 3 or len(pairs) <= max_pairs:
        return pairs
    chosen = np.random.default_rng(seed).choice(len(pairs), size=max_pairs, replace=False)
    return [pairs[i] for i in sorted(chosen)]


def exchange_suite(
    config: ProtocolConfig, mode: LedgerMode | str = LedgerMode.EXACT, settings: SymmetrySettings | None = None
) -> list[SymmetryReport]:
    settings = settings or SymmetrySettings()
    pairs = permutation_pairs(config.params.receivers, settings.max_exchange_pairs, settings.pair_seed)
    return [exchange_test(config, a, b, mode, settings) for a, b in pairs]
