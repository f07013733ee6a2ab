"""Numerical tolerances shared by the simulator, the oracle and the checks built on them."""

ATOL = 1e-10
"""Algebraic tolerance: unitarity, normalisation, amplitude comparisons."""

PROBABILITY_ATOL = 1e-12
"""Tolerance for probability sums and exact-mode energy identities."""

PRUNE_THRESHOLD = 1e-14
"""Branch probabilities below this are treated as zero."""

WITNESS_THRESHOLD = -1e-9
"""A partial-transpose eigenvalue below this marks a two-qubit state as entangled."""

MAX_QUBITS = 24

MAX_BRANCH_MEASUREMENTS = 20
