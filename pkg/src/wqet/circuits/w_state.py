"""W-state distribution circuits.

Both variants map `|10...0> -> |W_n>` and leave `|0...0>` untouched. The excitation starts on
qubit 0 and is split by a controlled Y-rotation followed by a CNOT back onto the control:

    CRy(theta)[c -> t]; CX[t -> c]:   |1>_c|0>_t  ->  cos(theta/2) |1>_c|0>_t + sin(theta/2) |0>_c|1>_t

To leave `r` of `m` equal shares on the control, `theta = 2 * acos(sqrt(r / m))`.

Both variants apply the same binary fan-out of splits, so they realize the same unitary on every
basis input. The log-depth tree couples source and target directly. The linear cascade only uses
nearest-neighbour gates and routes each long-range split through a chain of adjacent swaps.
"""

import math

from wqet.simulator.circuit import Circuit
from wqet.simulator.gates import controlled


def split_angle(keep: int, total: int) -> float:
    return 2 * math.acos(math.sqrt(keep / total))


def fan_out(n: int) -> list[tuple[int, int, int, int]]:
    """`(source, target, keep, total)` for every split, level by level."""
    splits = []
    blocks = [(0, n)]
    while blocks:
        next_level = []
        for start, size in blocks:
            if size < 2:
                continue
            left = size // 2
            splits.append((start, start + left, left, size))
            next_level += [(start, left), (start + left, size - left)]
        blocks = next_level
    return splits


def _split(circuit: Circuit, source: int, target: int, keep: int, total: int) -> None:
    circuit.append(controlled("ry", source, target, theta=split_angle(keep, total)))
    circuit.append(controlled("x", target, source))


def _swap(circuit: Circuit, a: int, b: int) -> None:
    circuit.extend([controlled("x", a, b), controlled("x", b, a), controlled("x", a, b)])


def linear_cascade(n: int) -> Circuit:
    """Nearest-neighbour version of the fan-out. Depth grows linearly with n."""
    circuit = Circuit(n)
    for source, target, keep, total in fan_out(n):
        # carries the target's content down to source + 1 and back afterwards
        path = [(q - 1, q) for q in range(target, source + 1, -1)]
        for a, b in path:
            _swap(circuit, a, b)
        _split(circuit, source, source + 1, keep, total)
        for a, b in reversed(path):
            _swap(circuit, a, b)
    return circuit


def log_depth_tree(n: int) -> Circuit:
    """Binary fan-out: every level halves the blocks, so the depth is 2 * ceil(log2 n)."""
    circuit = Circuit(n)
    for source, target, keep, total in fan_out(n):
        _split(circuit, source, target, keep, total)
    return circuit
