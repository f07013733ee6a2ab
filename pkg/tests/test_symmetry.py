from itertools import permutations
from unittest.mock import patch

import pytest

from tests.conftest import PUBLISHED_POINTS, make_config
from wqet.circuits import initial_angle
from wqet.circuits.w_state import split_angle
from wqet.protocol import LedgerMode
from wqet.simulator import Circuit, controlled, gate
from wqet.symmetry import (
    DegenerateSymmetryTestError,
    ReceiverSetMismatchError,
    SymmetryKind,
    SymmetryReport,
    SymmetrySettings,
    exchange_suite,
    exchange_test,
    permutation_pairs,
    translational_test,
)


def broken_preparation(n: int, h: float, k: float, strategy=None) -> Circuit:
    """Only qubits 0 and 1 share the excitation; the other receivers never see it."""
    return Circuit(
        n,
        [
            gate("ry", 0, theta=initial_angle(h, k)),
            controlled("ry", 0, 1, theta=split_angle(1, 2)),
            controlled("x", 1, 0),
        ],
    )


@pytest.mark.parametrize(("n", "h", "k"), PUBLISHED_POINTS)
def test_translational_exact(n, h, k):
    report = translational_test(make_config(n, h, k))
    assert report.kind is SymmetryKind.TRANSLATIONAL
    assert report.max_deviation <= 1e-12
    assert report.threshold == 1e-12
    assert report.passed


def test_translational_needs_two_receivers():
    with pytest.raises(DegenerateSymmetryTestError):
        translational_test(make_config(2))


def test_translational_sampled(config_3_11):
    report = translational_test(config_3_11, LedgerMode.SAMPLED)
    assert report.mode is LedgerMode.SAMPLED
    assert report.threshold > 0
    assert report.passed


@pytest.mark.slow
def test_translational_sampled_pass_rate():
    passed = sum(
        translational_test(make_config(4, 2.0, 1.0, shots=2000, seed=seed), LedgerMode.SAMPLED).passed
        for seed in range(100)
    )
    assert passed >= 99


@pytest.mark.parametrize("mode", [LedgerMode.EXACT, LedgerMode.SAMPLED])
def test_broken_preparation_fails_translational(mode):
    config = make_config(4, 2.0, 1.0, shots=2000, seed=1)
    with patch("wqet.protocol.qet.build_initial_state", broken_preparation):
        report = translational_test(config, mode)
    assert not report.passed
    assert report.max_deviation > 0.1


def test_exchange_exact_n3():
    report = exchange_test(make_config(3, 1.0, 1.0), (1, 2), (2, 1))
    assert report.kind is SymmetryKind.EXCHANGE
    assert report.orders == [(1, 2), (2, 1)]
    assert report.passed
    assert report.max_deviation <= 1e-12


@pytest.mark.parametrize(("n", "h", "k"), PUBLISHED_POINTS)
def test_exchange_suite_exact(n, h, k):
    reports = exchange_suite(make_config(n, h, k))
    expected_pairs = {3: 1, 4: 15, 5: 20}[n]
    assert len(reports) == expected_pairs
    assert all(report.passed for report in reports)


def test_exchange_sampled_same_seed(config_3_11):
    report = exchange_test(config_3_11, (1, 2), (2, 1), LedgerMode.SAMPLED)
    assert report.passed


def test_exchange_mismatched_receivers():
    with pytest.raises(ReceiverSetMismatchError):
        exchange_test(make_config(4), (1, 2, 3), (1, 2))
    with pytest.raises(ReceiverSetMismatchError):
        exchange_test(make_config(4), (1, 2, 3), (0, 1, 2))


def test_permutation_pairs_exhaustive():
    pairs = permutation_pairs((1, 2, 3))
    assert len(pairs) == 15
    assert len(set(pairs)) == 15
    assert all(a != b for a, b in pairs)


def test_permutation_pairs_sampled_is_seeded():
    pairs = permutation_pairs((1, 2, 3, 4), max_pairs=20, seed=5)
    assert len(pairs) == 20
    assert pairs == permutation_pairs((1, 2, 3, 4), max_pairs=20, seed=5)
    assert pairs != permutation_pairs((1, 2, 3, 4), max_pairs=20, seed=6)
    orders = set(permutations((1, 2, 3, 4)))
    assert all(a in orders and b in orders for a, b in pairs)


def test_report_pass_flag_follows_deviation():
    report = SymmetryReport(
        kind="exchange", mode="exact", n_qubits=3, h=1, k=1, max_deviation=2e-12, threshold=1e-12
    )
    assert not report.passed
    assert report.model_dump()["passed"] is False
    parsed = SymmetryReport.model_validate_json(report.model_dump_json())
    assert parsed == report


def test_settings_threshold_is_used():
    report = translational_test(make_config(3), settings=SymmetrySettings(exact_threshold=0.5))
    assert report.threshold == 0.5
