"""Live progress display for `wqet reproduce-all`."""

import collections
import time
from datetime import timedelta
from pathlib import Path
from threading import Lock

import yaml
from rich.console import Group
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table


def point_id(n_qubits: int, h: float, k: float) -> str:
    return f"N{n_qubits}_h{h:g}_k{k:g}"


class ReproduceProgressManager:
    def __init__(self, num_points: int, yaml_report_path: Path | None = None):
        """Progress bar over the configurations of a reproduce-all run.

        Args:
            num_points: Number of (N, h, k) configurations
            yaml_report_path: Where to keep a YAML overview of the configurations and their statuses
        """
        self._spinner_tasks: dict[str, TaskID] = {}
        self._lock = Lock()
        self._start_time = time.time()
        self._total_points = num_points
        self._points_by_status = collections.defaultdict(list)
        self._main_progress_bar = Progress(
            SpinnerColumn(spinner_name="dots2"),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TaskProgressColumn(),
            TimeElapsedColumn(),
            TextColumn("[cyan]{task.fields[eta]}[/cyan]"),
        )
        self._task_progress_bar = Progress(
            SpinnerColumn(spinner_name="dots2"),
            TextColumn("{task.fields[point_id]}"),
            TextColumn("{task.fields[status]}"),
            TimeElapsedColumn(),
        )
        self._main_task_id = self._main_progress_bar.add_task("[cyan]Configurations", total=num_points, eta="")
        self.render_group = Group(self._main_progress_bar, Table(), self._task_progress_bar)
        self._yaml_report_path = yaml_report_path

    @property
    def n_completed(self) -> int:
        return sum(len(points) for points in self._points_by_status.values())

    @property
    def points_by_status(self) -> dict[str, list[str]]:
        return dict(self._points_by_status)

    def _get_eta_text(self) -> str:
        try:
            remaining = (time.time() - self._start_time) / self.n_completed * (self._total_points - self.n_completed)
            return f"eta: {timedelta(seconds=int(remaining))}"
        except ZeroDivisionError:
            return ""

    def update_status_table(self) -> None:
        # rich tables cannot be updated in place
        t = Table()
        t.add_column("Status")
        t.add_column("Count", justify="right", style="bold cyan")
        t.add_column("Configurations")
        with self._lock:
            for status, points in sorted(self._points_by_status.items(), key=lambda x: len(x[1]), reverse=True):
                t.add_row(status, str(len(points)), ", ".join(sorted(points)))
        self.render_group.renderables[1] = t

    def update_point_status(self, point: str, message: str) -> None:
        with self._lock:
            self._task_progress_bar.update(self._spinner_tasks[point], status=message, point_id=point)

    def on_point_start(self, point: str) -> None:
        with self._lock:
            self._spinner_tasks[point] = self._task_progress_bar.add_task(
                description=point, status="started", total=None, point_id=point
            )

    def on_point_end(self, point: str, status: str) -> None:
        with self._lock:
            self._points_by_status[status].append(point)
            try:
                self._task_progress_bar.remove_task(self._spinner_tasks[point])
            except KeyError:
                pass
            self._main_progress_bar.update(self._main_task_id, advance=1, eta=self._get_eta_text())
        self.update_status_table()
        if self._yaml_report_path is not None:
            self._save_overview_yaml(self._yaml_report_path)

    def on_uncaught_exception(self, point: str, exception: Exception) -> None:
        self.on_point_end(point, f"Uncaught {type(exception).__name__}")

    def _save_overview_yaml(self, path: Path) -> None:
        with self._lock:
            data = {"points_by_status": {status: sorted(points) for status, points in self._points_by_status.items()}}
            path.write_text(yaml.dump(data, indent=4))
