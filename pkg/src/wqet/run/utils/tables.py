"""Energy tables over the full (N, h, k) matrix as CSV and JSON."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable
from pathlib import Path

from pydantic import BaseModel

from wqet.run.utils.save import ExperimentReport

TABLE_FORMAT = "wqet-tables-1"
TABLE_POINTS: tuple[tuple[int, float, float], ...] = tuple(
    (n, h, k) for n in (3, 4, 5) for h, k in ((2.0, 1.0), (1.0, 1.0))
)
"""The published configurations: N in {3, 4, 5} with (h, k) in {(2, 1), (1, 1)}."""
CSV_COLUMNS = ["n_qubits", "h", "k", "quantity", "value", "stderr", "exact"]


class IncompleteReportSetError(ValueError):
    """Raised when tables are requested for a report set missing some configuration."""


class TableRow(BaseModel):
    n_qubits: int
    h: float
    k: float
    quantity: str
    value: float
    stderr: float
    exact: float | None = None
    """Oracle value when the report carries an exact ledger."""


class EnergyTables(BaseModel):
    table_format: str = TABLE_FORMAT
    rows: list[TableRow]


def _point(report: ExperimentReport) -> tuple[int, float, float]:
    params = report.config.params
    return params.n_qubits, params.h, params.k


def table_rows(report: ExperimentReport) -> list[TableRow]:
    """One row per quantity, in ledger order (`H_tot`, `H_sub_j`, `E_o`, `ΔE_j`, `H_q`, `P_mu+`)."""
    n, h, k = _point(report)
    exact = report.ledgers["exact"].estimates() if "exact" in report.ledgers else {}
    rows = []
    for quantity, estimate in report.primary_ledger.estimates().items():
        reference = exact.get(quantity)
        rows.append(
            TableRow(
                n_qubits=n,
                h=h,
                k=k,
                quantity=quantity,
                value=estimate.mean,
                stderr=estimate.stderr,
                exact=reference.mean if reference is not None else None,
            )
        )
    return rows


def build_tables(
    reports: Iterable[ExperimentReport], required: Iterable[tuple[int, float, float]] = TABLE_POINTS
) -> EnergyTables:
    by_point = {_point(report): report for report in reports}
    missing = [point for point in required if point not in by_point]
    if missing:
        raise IncompleteReportSetError(f"No report for (N, h, k) in {missing}")
    rows = []
    # sorted by N, then h descending, then k; quantities keep their ledger order
    for point in sorted(by_point, key=lambda p: (p[0], -p[1], p[2])):
        rows.extend(table_rows(by_point[point]))
    return EnergyTables(rows=rows)


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def tables_to_csv(tables: EnergyTables) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in tables.rows:
        writer.writerow(
            [row.n_qubits, _fmt(row.h), _fmt(row.k), row.quantity, _fmt(row.value), _fmt(row.stderr), _fmt(row.exact)]
        )
    return buffer.getvalue()


def emit_tables(
    reports: Iterable[ExperimentReport],
    csv_path: Path | None = None,
    json_path: Path | None = None,
    *,
    required: Iterable[tuple[int, float, float]] = TABLE_POINTS,
) -> EnergyTables:
    """Write the tables; output depends only on the reports, so reruns are byte-identical."""
    tables = build_tables(reports, required)
    for path, text in ((csv_path, tables_to_csv(tables)), (json_path, tables.model_dump_json(indent=2) + "\n")):
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
    return tables


def load_tables(path: Path) -> EnergyTables:
    return EnergyTables.model_validate_json(path.read_text(encoding="utf-8"))
