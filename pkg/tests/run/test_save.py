import json

import pytest

from tests.conftest import make_config
from wqet import __version__
from wqet.run.experiment import RunMode, build_protocol_config, run_experiment
from wqet.run.utils.save import REPORT_FORMAT, ExperimentReport, load_report, save_report


@pytest.fixture
def report() -> ExperimentReport:
    return run_experiment(make_config(3, 2.0, 1.0, shots=500, seed=11), RunMode.BOTH)


def test_report_metadata(report):
    assert report.report_format == REPORT_FORMAT
    assert report.version == __version__
    assert report.seed == 11
    assert set(report.ledgers) == {"sampled", "exact"}
    assert report.primary_ledger is report.ledgers["sampled"]
    assert report.wall_time is not None and report.wall_time >= 0


def test_exact_only_primary_ledger():
    report = run_experiment(make_config(3), RunMode.EXACT)
    assert list(report.ledgers) == ["exact"]
    assert report.primary_ledger is report.ledgers["exact"]


def test_save_report_without_timing(report, tmp_path):
    path = tmp_path / "nested" / "report.json"
    printed = []
    save_report(report, path, print_fct=printed.append)
    data = json.loads(path.read_text())
    assert "wall_time" not in data
    assert "workers" not in data["config"]
    assert data["report_format"] == REPORT_FORMAT
    assert printed == [f"Saved report to '{path}'"]


def test_save_report_with_timing(report, tmp_path):
    path = tmp_path / "report.json"
    save_report(report, path, with_timing=True, print_path=False)
    assert json.loads(path.read_text())["wall_time"] == report.wall_time


def test_save_report_skips_none(tmp_path):
    save_report(None, tmp_path / "report.json", print_path=False)
    assert not (tmp_path / "report.json").exists()


def test_reports_are_reproducible(tmp_path):
    config = make_config(4, 1.0, 1.0, shots=300, seed=5)
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    save_report(run_experiment(config), first, print_path=False)
    save_report(run_experiment(config.model_copy(update={"workers": 3})), second, print_path=False)
    assert first.read_bytes() == second.read_bytes()


def test_load_report_round_trip(report, tmp_path):
    path = tmp_path / "report.json"
    save_report(report, path, print_path=False)
    loaded = load_report(path)
    assert loaded.config == report.config
    assert loaded.ledgers == report.ledgers
    assert loaded.symmetry == report.symmetry
    assert loaded.wall_time is None


@pytest.mark.parametrize(
    ("mode", "expected"),
    [("both", ["sampled", "exact"]), ("exact", ["exact"]), ("sampled", ["sampled"])],
)
def test_run_mode_ledgers(mode, expected):
    assert [m.value for m in RunMode(mode).ledger_modes] == expected


def test_symmetry_checks_in_report(report):
    kinds = [(r.kind.value, r.mode.value) for r in report.symmetry]
    assert kinds == [("translational", "sampled"), ("translational", "exact"), ("exchange", "exact")]
    assert all(r.passed for r in report.symmetry)


def test_symmetry_can_be_skipped():
    assert run_experiment(make_config(3), "exact", symmetry=False).symmetry == []


def test_two_qubits_have_no_symmetry_checks():
    assert run_experiment(make_config(2), "exact").symmetry == []


def test_build_protocol_config_from_yaml_section():
    config = build_protocol_config(4, 2.0, 1.0, {"shots": 10, "seed": 3, "prep": "linear"})
    assert config.params.n_qubits == 4
    assert (config.shots, config.seed, config.prep.value) == (10, 3, "linear")
    with pytest.raises(ValueError):
        build_protocol_config(1, 2.0, 1.0)
