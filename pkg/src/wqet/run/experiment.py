"""One experiment: the protocol ledgers for a configuration plus its symmetry checks."""

from __future__ import annotations

import time
from enum import Enum
from typing import Any

from wqet.protocol import LedgerMode, ProtocolConfig, get_ledger_runner
from wqet.run.utils.save import ExperimentReport
from wqet.symmetry import SymmetryReport, SymmetrySettings, exchange_test, translational_test
from wqet.utils.log import logger


class RunMode(str, Enum):
    SAMPLED = "sampled"
    EXACT = "exact"
    BOTH = "both"

    @property
    def ledger_modes(self) -> list[LedgerMode]:
        if self is RunMode.BOTH:
            return [LedgerMode.SAMPLED, LedgerMode.EXACT]
        return [LedgerMode(self.value)]


def build_protocol_config(n_qubits: int, h: float, k: float, protocol: dict[str, Any] | None = None) -> ProtocolConfig:
    """Combine the model point with the `protocol` section of a YAML config."""
    return ProtocolConfig.model_validate({"params": {"n_qubits": n_qubits, "h": h, "k": k}} | (protocol or {}))


def run_symmetry_checks(
    config: ProtocolConfig, ledgers: dict[LedgerMode, Any], settings: SymmetrySettings
) -> list[SymmetryReport]:
    """Translational test on every ledger; exchange of the natural and reversed readout order in exact mode."""
    if config.n_qubits < 3:
        return []
    reports = [translational_test(config, mode, settings, ledger=ledger) for mode, ledger in ledgers.items()]
    if LedgerMode.EXACT in ledgers:
        order = config.receiver_order
        reports.append(exchange_test(config, order, tuple(reversed(order)), LedgerMode.EXACT, settings))
    return reports


def run_experiment(
    config: ProtocolConfig,
    mode: RunMode | str = RunMode.BOTH,
    *,
    settings: SymmetrySettings | None = None,
    symmetry: bool = True,
) -> ExperimentReport:
    mode = RunMode(mode)
    settings = settings or SymmetrySettings()
    params = config.params
    logger.info(f"Running N={params.n_qubits}, h={params.h}, k={params.k} ({mode.value})")
    start = time.perf_counter()
    ledgers = {ledger_mode: get_ledger_runner(ledger_mode)(config) for ledger_mode in mode.ledger_modes}
    reports = run_symmetry_checks(config, ledgers, settings) if symmetry else []
    for report in reports:
        if not report.passed:
            logger.warning(
                f"{report.kind.value} symmetry check failed ({report.mode.value}): "
                f"deviation {report.max_deviation:.3e} > {report.threshold:.3e}"
            )
    return ExperimentReport(
        config=config,
        mode=mode.value,
        ledgers={ledger_mode.value: ledger for ledger_mode, ledger in ledgers.items()},
        symmetry=reports,
        wall_time=time.perf_counter() - start,
    )
