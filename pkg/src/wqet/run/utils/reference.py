"""Bundled published energy readings and the deviation report against them.

The comparison is informational: the published circuits cannot be fully reconstructed, so
large deviations on the `H_sub` rows are expected and only flagged, never treated as failures.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from enum import Enum
from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict

from wqet.config import builtin_config_dir
from wqet.observables import Estimate
from wqet.protocol import SENDER, EnergyLedger
from wqet.run.utils.save import ExperimentReport

DEFAULT_REFERENCE_PATH = builtin_config_dir / "reference" / "qet_tables.yaml"
GAP_FLAG = "reconstruction gap"
GAP_SIGMA = 5.0
ROUNDING_TOLERANCE = 5e-4
"""Published values carry four decimals."""


class MissingReferenceError(KeyError):
    """Raised when the dataset has no rows for the requested configuration."""


class ReferenceChecksumError(ValueError):
    """Raised when the bundled reference file does not match its recorded checksum."""


class ReferenceSource(str, Enum):
    SIMULATOR = "simulator"
    DEVICE = "device"

    @property
    def other(self) -> ReferenceSource:
        return ReferenceSource.DEVICE if self is ReferenceSource.SIMULATOR else ReferenceSource.SIMULATOR


class ReferenceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_qubits: int
    h: float
    k: float
    quantity: str
    source: ReferenceSource
    value: float
    stderr: float | None = None


class ReferenceDataset(BaseModel):
    model_config = ConfigDict(frozen=True)

    dataset_format: str
    sources: dict[ReferenceSource, str]
    """Human-readable platform name per source."""
    rows: tuple[ReferenceRow, ...]

    def lookup(self, n_qubits: int, h: float, k: float, source: ReferenceSource | str) -> dict[str, ReferenceRow]:
        source = ReferenceSource(source)
        found = {
            row.quantity: row
            for row in self.rows
            if (row.n_qubits, row.h, row.k, row.source) == (n_qubits, h, k, source)
        }
        if not found:
            raise MissingReferenceError(f"No {source.value} reference rows for N={n_qubits}, h={h}, k={k}")
        return found


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def load_reference_dataset(path: Path = DEFAULT_REFERENCE_PATH, *, verify: bool = True) -> ReferenceDataset:
    """Load the dataset, checking it against the `<name>.sha256` file next to it."""
    path = Path(path)
    if verify:
        checksum_path = path.with_name(path.name + ".sha256")
        if not checksum_path.exists():
            raise ReferenceChecksumError(f"No checksum file {checksum_path}")
        expected = checksum_path.read_text().split()[0]
        if (actual := _sha256(path)) != expected:
            raise ReferenceChecksumError(f"Checksum of {path} is {actual}, expected {expected}")
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    rows = []
    for table in data["tables"]:
        for source in ReferenceSource:
            for quantity, (value, stderr) in table.get(source.value, {}).items():
                rows.append(
                    ReferenceRow(
                        n_qubits=table["n_qubits"],
                        h=table["h"],
                        k=table["k"],
                        quantity=quantity,
                        source=source,
                        value=value,
                        stderr=stderr,
                    )
                )
    return ReferenceDataset(dataset_format=data["dataset_format"], sources=data["sources"], rows=tuple(rows))


def artifact_quantity(ledger: EnergyLedger, quantity: str) -> Estimate:
    """The ledger value matching a published row name.

    Published `H_n` rows are successive differences `H_sub(n-1) - H_sub(n)` with `H_sub(0) = H_tot`;
    `H_1` is then the sender's local energy and `H_n` for n >= 2 the energy harvested at position n-1.
    """
    if quantity == "H_tot":
        return ledger.h_total_post
    if quantity == "E_o":
        return Estimate.exact(ledger.e0)
    if quantity.startswith("H_sub_"):
        return ledger.h_sub_at(int(quantity.removeprefix("H_sub_")))
    if quantity.startswith("H_"):
        n = int(quantity.removeprefix("H_"))
        return ledger.local[SENDER] if n == 1 else ledger.harvested[n - 2]
    raise KeyError(f"Unknown quantity {quantity!r}")


class DeviationRow(BaseModel):
    quantity: str
    artifact: float
    artifact_stderr: float
    reference: float
    reference_stderr: float | None
    companion: float | None = None
    """The same row from the other source, shown side by side."""
    deviation: float
    sigma: float | None
    """Deviation in units of the combined standard error; None when neither side has one."""
    flag: str = ""


class DeviationTable(BaseModel):
    n_qubits: int
    h: float
    k: float
    source: ReferenceSource
    rows: list[DeviationRow]

    @property
    def gaps(self) -> list[str]:
        return [row.quantity for row in self.rows if row.flag]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["n_qubits", "h", "k", "source", *DeviationRow.model_fields])
        for row in self.rows:
            values = ["" if value is None else value for value in row.model_dump().values()]
            writer.writerow([self.n_qubits, self.h, self.k, self.source.value, *values])
        return buffer.getvalue()


def compare_reference(
    report: ExperimentReport, dataset: ReferenceDataset, source: ReferenceSource | str = ReferenceSource.SIMULATOR
) -> DeviationTable:
    """Deviation of every published quantity from the report's primary ledger.

    Rows deviating by more than five combined standard errors (and more than the published rounding)
    are flagged as a reconstruction gap.
    """
    source = ReferenceSource(source)
    params = report.config.params
    reference = dataset.lookup(params.n_qubits, params.h, params.k, source)
    try:
        companion = dataset.lookup(params.n_qubits, params.h, params.k, source.other)
    except MissingReferenceError:
        companion = {}
    ledger = report.primary_ledger
    rows = []
    for quantity, ref in reference.items():
        ours = artifact_quantity(ledger, quantity)
        deviation = abs(ours.mean - ref.value)
        combined = math.sqrt(ours.stderr**2 + (ref.stderr or 0.0) ** 2)
        sigma = deviation / combined if combined > 0 else None
        gap = deviation > max(GAP_SIGMA * combined, ROUNDING_TOLERANCE)
        rows.append(
            DeviationRow(
                quantity=quantity,
                artifact=ours.mean,
                artifact_stderr=ours.stderr,
                reference=ref.value,
                reference_stderr=ref.stderr,
                companion=companion[quantity].value if quantity in companion else None,
                deviation=deviation,
                sigma=sigma,
                flag=GAP_FLAG if gap else "",
            )
        )
    return DeviationTable(n_qubits=params.n_qubits, h=params.h, k=params.k, source=source, rows=rows)
