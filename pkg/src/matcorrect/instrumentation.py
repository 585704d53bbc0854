"""Operation counters and the bit-accounted random source.

All cost claims in the test suite are made in counted ring multiplications,
never wall time.  Bulk operations (matrix-vector products, convolutions)
charge their full multiplication count in one call, so the counter is exact
for sequential execution and an upper bound if callers ever parallelize.
"""

from __future__ import annotations

import random

import numpy as np


class MultCounter:
    """Process-wide accumulator of ring multiplications."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int) -> None:
        self.count += n

    def reset(self) -> None:
        self.count = 0


#: The single global multiplication counter.
MULTS = MultCounter()


def count_mults(n: int) -> None:
    MULTS.add(int(n))


def reset_mults() -> None:
    MULTS.reset()


def mults() -> int:
    return MULTS.count


class CountingRng:
    """Random source that ledgers every bit it hands out.

    Wraps ``random.Random`` so runs are reproducible bit-exactly from the
    seed.  ``bits_used`` is the exact number of PRNG bits requested, which
    is what the few-random-bits budget assertions audit.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)
        self.bits_used = 0

    def getrandbits(self, k: int) -> int:
        if k == 0:
            return 0
        self.bits_used += k
        return self._rng.getrandbits(k)

    def bit(self) -> int:
        return self.getrandbits(1)

    def bit_vector(self, length: int) -> np.ndarray:
        """A 0/1 vector of independent fair bits; consumes ``length`` bits."""
        if length == 0:
            return np.zeros(0, dtype=np.int64)
        word = self.getrandbits(length)
        return np.array([(word >> i) & 1 for i in range(length)], dtype=np.int64)

    def randrange(self, m: int) -> int:
        """Uniform integer in [0, m) by rejection sampling; bits are ledgered."""
        value, _ = self.randrange_with_bits(m)
        return value

    def randrange_with_bits(self, m: int) -> tuple[int, int]:
        """Uniform integer in [0, m) plus the number of bits it cost."""
        if m <= 0:
            raise ValueError("randrange bound must be positive")
        if m == 1:
            return 0, 0
        nbits = (m - 1).bit_length()
        used = 0
        while True:
            x = self.getrandbits(nbits)
            used += nbits
            if x < m:
                return x, used

    def spawn(self, label: int) -> "CountingRng":
        """Independent child stream; its bits are ledgered separately."""
        return CountingRng(hash((self.seed, label)) & 0xFFFFFFFFFFFFFFFF)
