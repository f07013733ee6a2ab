"""The multi-receiver energy-teleportation protocol: preparation, injection, feedforward and harvesting."""

from enum import Enum

from wqet import LedgerRunner
from wqet.protocol.ledger import EnergyLedger, ProtocolConfig, ShotRecord
from wqet.protocol.qet import (
    MU_BIT,
    SENDER,
    SENDER_Z_BIT,
    build_qet_circuit,
    feedforward,
    harvest,
    inject,
    prepare_state,
    receiver_bit,
    run_protocol,
    run_protocol_exact,
    run_shot,
)


class LedgerMode(str, Enum):
    SAMPLED = "sampled"
    EXACT = "exact"


_LEDGER_RUNNERS: dict[LedgerMode, LedgerRunner] = {
    LedgerMode.SAMPLED: run_protocol,
    LedgerMode.EXACT: run_protocol_exact,
}


def get_ledger_runner(mode: LedgerMode | str) -> LedgerRunner:
    try:
        return _LEDGER_RUNNERS[LedgerMode(mode)]
    except ValueError:
        raise ValueError(f"Unknown ledger mode: {mode} (available: {[m.value for m in LedgerMode]})") from None


__all__ = [
    "EnergyLedger",
    "LedgerMode",
    "MU_BIT",
    "ProtocolConfig",
    "SENDER",
    "SENDER_Z_BIT",
    "ShotRecord",
    "build_qet_circuit",
    "feedforward",
    "get_ledger_runner",
    "harvest",
    "inject",
    "prepare_state",
    "receiver_bit",
    "run_protocol",
    "run_protocol_exact",
    "run_shot",
]
