"""Deterministic ground truth: exact measurement branches, reduced states and entanglement checks."""

from wqet.oracle.branches import (
    Branch,
    BranchCapExceeded,
    BranchDistribution,
    enumerate_branches,
    exact_averaged_expectation,
)
from wqet.oracle.entanglement import (
    PairWitness,
    ReducedState,
    entanglement_witness,
    measurement_robustness,
    partial_transpose_min_eigenvalue,
    reduced_state,
)

__all__ = [
    "Branch",
    "BranchCapExceeded",
    "BranchDistribution",
    "PairWitness",
    "ReducedState",
    "entanglement_witness",
    "enumerate_branches",
    "exact_averaged_expectation",
    "measurement_robustness",
    "partial_transpose_min_eigenvalue",
    "reduced_state",
]
