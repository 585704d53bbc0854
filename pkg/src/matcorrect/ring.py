"""Exact commutative-ring arithmetic: integers mod a prime, or wrapping
64-bit integers (zero divisors included).

Every equality test in the correction algorithms is decided under one of
these two rings.  Floating point is deliberately absent: the algorithms
rely on exact cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .instrumentation import count_mults

MASK64 = (1 << 64) - 1

# Largest modulus for which the int64 fast path cannot overflow: dot
# products of length up to 2**22 with entries < 2**20 stay below 2**63.
_FAST_MOD_LIMIT = 1 << 20


@dataclass(frozen=True)
class RingContext:
    """The ring under which a matrix lives.

    ``modulus == 0`` selects wrapping 64-bit arithmetic (integers mod 2^64);
    ``modulus >= 2`` selects integers mod that value.
    """

    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError(f"invalid modulus {self.modulus}")
        if self.modulus >= (1 << 64):
            raise ValueError("modulus must fit in 64 bits")

    @property
    def is_wrap(self) -> bool:
        return self.modulus == 0

    @property
    def dtype(self):
        """Array dtype: exact for the ring, fast where overflow is impossible."""
        if self.is_wrap:
            return np.uint64
        if self.modulus <= _FAST_MOD_LIMIT:
            return np.int64
        return object

    def normalize(self, values):
        """Reduce an array (or scalar) to canonical form."""
        if self.is_wrap:
            if np.isscalar(values) or isinstance(values, int):
                return int(values) & MASK64
            return np.asarray(values, dtype=np.uint64)
        if np.isscalar(values) or isinstance(values, int):
            return int(values) % self.modulus
        arr = np.asarray(values)
        if arr.dtype == object:
            return arr % self.modulus
        return np.asarray(arr % self.modulus, dtype=self.dtype)

    def array(self, values) -> np.ndarray:
        """Canonical array of ring elements in this context's dtype."""
        arr = np.asarray(values, dtype=object)
        if self.is_wrap:
            flat = [int(v) & MASK64 for v in arr.ravel()]
        else:
            flat = [int(v) % self.modulus for v in arr.ravel()]
        out = np.array(flat, dtype=self.dtype).reshape(arr.shape)
        return out

    # Scalar operations (canonical in, canonical out).

    def add(self, a: int, b: int) -> int:
        if self.is_wrap:
            return (a + b) & MASK64
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        if self.is_wrap:
            return (a - b) & MASK64
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        count_mults(1)
        if self.is_wrap:
            return (a * b) & MASK64
        return (a * b) % self.modulus

    def neg(self, a: int) -> int:
        if self.is_wrap:
            return (-a) & MASK64
        return (-a) % self.modulus


def dot(a, b, ctx: RingContext) -> int:
    """Ring dot product; charges len(a) multiplications."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch(f"dot of shapes {a.shape} and {b.shape}")
    count_mults(len(a))
    if len(a) == 0:
        return 0
    if ctx.dtype == object:
        total = int(np.dot(a.astype(object), b.astype(object)))
    else:
        total = int(np.dot(a.astype(ctx.dtype), b.astype(ctx.dtype)))
    return ctx.normalize(total)
