from collections.abc import Callable
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field

from wqet import __version__
from wqet.protocol import EnergyLedger, ProtocolConfig
from wqet.symmetry import SymmetryReport

REPORT_FORMAT = "wqet-report-1"


class ExperimentReport(BaseModel):
    """Everything one `wqet run` produces. Reproducible from (`version`, `config`) alone."""

    report_format: str = REPORT_FORMAT
    version: str = __version__
    config: ProtocolConfig
    mode: Literal["sampled", "exact", "both"]
    ledgers: dict[str, EnergyLedger]
    """Keyed by ledger mode (`sampled`, `exact`)."""
    symmetry: list[SymmetryReport] = []
    wall_time: float | None = Field(default=None, ge=0)

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def primary_ledger(self) -> EnergyLedger:
        """The sampled ledger if there is one, else the exact one."""
        return self.ledgers.get("sampled") or self.ledgers["exact"]

    def to_json(self, *, with_timing: bool = False) -> str:
        exclude = None if with_timing else {"wall_time"}
        return self.model_dump_json(indent=2, exclude=exclude)


def save_report(
    report: ExperimentReport | None,
    path: Path | None,
    *,
    with_timing: bool = False,
    print_path: bool = True,
    print_fct: Callable = print,
) -> None:
    """Write the report as JSON.

    Args:
        report: The report to save. Nothing is written if it is None.
        path: Target file; parent directories are created.
        with_timing: Include the wall time. Without it, equal inputs give byte-identical files.
        print_path: Whether to print confirmation of path to the terminal.
    """
    if path is None or report is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json(with_timing=with_timing) + "\n")
    if print_path:
        print_fct(f"Saved report to '{path}'")


def load_report(path: Path) -> ExperimentReport:
    return ExperimentReport.model_validate_json(path.read_text())
