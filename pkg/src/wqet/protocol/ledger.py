from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wqet.circuits import PrepStrategy
from wqet.observables import E0Convention, Estimate, ModelParams
from wqet.simulator.rng import MAX_SEED


class ProtocolConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: ModelParams
    shots: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    prep: PrepStrategy = PrepStrategy.LOG
    receiver_order: tuple[int, ...] = ()
    """Order in which receivers read out; empty means `1, 2, ..., N-1`."""
    e0_convention: E0Convention = E0Convention.TABLE_CONSISTENT
    feedforward: bool = True
    workers: int = Field(default=1, ge=1, exclude=True)
    """Shot-level threads. Excluded from serialisation: results do not depend on it."""

    @model_validator(mode="before")
    @classmethod
    def _default_order(cls, data: Any) -> Any:
        if isinstance(data, dict) and not data.get("receiver_order") and data.get("params") is not None:
            params = data["params"]
            n_qubits = params.n_qubits if isinstance(params, ModelParams) else params.get("n_qubits")
            if isinstance(n_qubits, int):
                data = {**data, "receiver_order": tuple(range(1, n_qubits))}
        return data

    @model_validator(mode="after")
    def _order_is_permutation(self) -> ProtocolConfig:
        if sorted(self.receiver_order) != list(self.params.receivers):
            raise ValueError(
                f"Receiver order {self.receiver_order} is not a permutation of {self.params.receivers}"
            )
        return self

    @property
    def n_qubits(self) -> int:
        return self.params.n_qubits

    def with_order(self, order: tuple[int, ...] | list[int]) -> ProtocolConfig:
        return ProtocolConfig.model_validate(self.model_dump() | {"receiver_order": tuple(order), "workers": self.workers})


@dataclass(frozen=True)
class ShotRecord:
    mu: int
    receivers: dict[int, int]
    alice_z: int

    def bits(self, n_qubits: int) -> list[int]:
        """Readout of every qubit, qubit 0 from the final Z-readout."""
        return [self.alice_z] + [self.receivers[q] for q in range(1, n_qubits)]


class EnergyLedger(BaseModel):
    """Energies of one protocol configuration.

    `h_sub[j - 1]` and `harvested[j - 1]` belong to readout position `j` (1-based) in
    `receiver_order`; `local[i]` belongs to qubit `i`.
    """

    mode: Literal["sampled", "exact"]
    receiver_order: tuple[int, ...]
    feedforward: bool = True
    e0: float
    h_total_pre: float
    """Exact total energy of the prepared state, before injection."""
    h_total_post: Estimate
    h_sub: list[Estimate]
    local: list[Estimate]
    harvested: list[Estimate]
    mu_plus: Estimate
    """Probability of the `mu = +1` injection outcome."""

    @property
    def n_qubits(self) -> int:
        return len(self.local)

    def h_sub_at(self, position: int) -> Estimate:
        return self.h_sub[position - 1]

    def harvested_by_receiver(self) -> dict[int, Estimate]:
        return dict(zip(self.receiver_order, self.harvested))

    @property
    def receiver_energy(self) -> float:
        """Sum of the receivers' local energies."""
        return sum(self.local[q].mean for q in self.receiver_order)

    @property
    def telescoping_residual(self) -> float:
        return abs(sum(e.mean for e in self.harvested) - self.h_sub[0].mean)

    def estimates(self) -> dict[str, Estimate]:
        """Every reported quantity under its table name (`H_tot`, `H_sub_1`, `ΔE_1`, `H_0`, ...)."""
        rows = {"H_tot": self.h_total_post}
        rows |= {f"H_sub_{j}": e for j, e in enumerate(self.h_sub, start=1)}
        rows["E_o"] = Estimate.exact(self.e0)
        rows |= {f"ΔE_{j}": e for j, e in enumerate(self.harvested, start=1)}
        rows |= {f"H_{q}": e for q, e in enumerate(self.local)}
        rows["P_mu+"] = self.mu_plus
        return rows
