from dataclasses import dataclass, field

import numpy as np

MAX_SEED = 2**64 - 1


@dataclass
class RngStream:
    """Independent random substream `stream_index` of `master_seed`.

    The generator depends only on the `(master_seed, stream_index)` pair, so shot `i`
    draws the same numbers whichever worker runs it and in whatever order.
    """

    master_seed: int
    stream_index: int = 0
    _generator: np.random.Generator | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.master_seed <= MAX_SEED:
            raise ValueError(f"Master seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.stream_index < 0:
            raise ValueError(f"Stream index must be non-negative, got {self.stream_index}")

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            sequence = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
            self._generator = np.random.Generator(np.random.PCG64(sequence))
        return self._generator

    def random(self) -> float:
        return float(self.generator.random())

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.master_seed, index)
