"""Prime generation and the residue machinery that buckets columns into
strips so that every erroneous column is eventually isolated.

Residue arithmetic is specified on 1-based column positions; the
``members`` arrays hold the corresponding 0-based storage indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def first_primes(m: int) -> list[int]:
    """The exact first m primes via a sieve sized by the p_m upper bound."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m < 6:
        return [2, 3, 5, 7, 11][:m]
    # p_m < m (ln m + ln ln m) for m >= 6
    limit = int(m * (math.log(m) + math.log(math.log(m)))) + 10
    while True:
        primes = _sieve(limit)
        if len(primes) >= m:
            return primes[:m]
        limit *= 2


def _sieve(limit: int) -> list[int]:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(flags)]


def prime_budget(l: int, n: int, c: float = 2.0) -> int:
    """Number of primes needed to separate any l column indices of 1..n.

    The multiplicative constant is not derivable analytically; the default
    c=2 is validated empirically by the separation property test.
    ln ln n is floored at 1 so the formula stays meaningful for tiny n.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    loglog = math.log(math.log(n)) if n >= 16 else 1.0
    loglog = max(loglog, 1.0)
    return max(1, math.ceil(c * l * math.log(n) / loglog))


@dataclass
class ResidueStrip:
    """Columns j (1-based) with j mod p == residue, stored 0-based."""

    prime: int
    residue: int
    members: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))


def residue_strips(n: int, p: int) -> list[ResidueStrip]:
    """p strips partitioning columns 1..n by residue mod p."""
    if p < 2:
        raise ValueError("prime must be >= 2")
    positions = np.arange(1, n + 1, dtype=np.int64)
    residues = positions % p
    return [
        ResidueStrip(prime=p, residue=r, members=np.flatnonzero(residues == r))
        for r in range(p)
    ]


def verify_separation(indices, primes) -> bool:
    """True iff every index is isolated from the rest by some listed prime.

    Test-support oracle: indices are 1-based column positions.
    """
    members = sorted(set(int(i) for i in indices))
    if len(members) <= 1:
        return bool(primes)
    for i in members:
        others = [j for j in members if j != i]
        if not any(all(i % p != j % p for j in others) for p in primes):
            return False
    return True


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_above(x: int) -> int:
    """Smallest prime strictly greater than x."""
    n = max(x + 1, 2)
    if n % 2 == 0 and n != 2:
        n += 1
    while not is_prime(n):
        n += 2 if n > 2 else 1
    return n
