import random

import pytest

from matcorrect.primes import (
    first_primes,
    is_prime,
    next_prime_above,
    prime_budget,
    residue_strips,
    verify_separation,
)


def test_first_primes_oracle():
    assert first_primes(5) == [2, 3, 5, 7, 11]
    assert first_primes(25)[-1] == 97
    assert first_primes(100)[-1] == 541
    with pytest.raises(ValueError):
        first_primes(0)


def test_prime_budget_oracle():
    # ceil(2 * 4 * ln 256 / ln ln 256) = 26, computed independently.
    assert prime_budget(4, 256, 2.0) == 26
    assert prime_budget(1, 8, 2.0) == 5
    # Small n floors the ln ln n denominator at 1.
    assert prime_budget(1, 4, 2.0) >= 1


def test_residue_strips_partition():
    strips = residue_strips(10, 3)
    assert len(strips) == 3
    members = sorted(j for s in strips for j in s.members)
    assert members == list(range(10))
    # 1-based residue arithmetic: column index 0 is position 1.
    for s in strips:
        for j in s.members:
            assert (int(j) + 1) % s.prime == s.residue


def test_residue_strips_large_prime():
    strips = residue_strips(6, 7)
    sizes = sorted(len(s.members) for s in strips)
    assert sizes == [0, 1, 1, 1, 1, 1, 1]


def test_verify_separation_oracles():
    # {3, 7}: prime 2 gives residues 1, 1 (collision) but 3 separates (0 vs 1).
    assert verify_separation([3, 7], [2, 3])
    # {1, 3}: both odd, prime 2 alone cannot separate.
    assert not verify_separation([1, 3], [2])
    assert verify_separation([5], [2])


def test_separation_budget_empirical():
    # 200 random index sets per size at n=512; the default budget constant
    # must separate every one of them.
    rnd = random.Random(1234)
    n = 512
    for size in (4, 8, 16):
        primes = first_primes(prime_budget(size, n, 2.0))
        for _ in range(200):
            indices = [i + 1 for i in rnd.sample(range(n), size)]
            assert verify_separation(indices, primes)


def test_is_prime_deterministic():
    known = {2, 3, 5, 7, 11, 13, 1_000_003, (1 << 61) - 1}
    for p in known:
        assert is_prime(p)
    for c in (0, 1, 4, 1_000_001, 561, 341550071728321 - 1):
        assert not is_prime(c)


def test_next_prime_above():
    assert next_prime_above(100) == 101
    assert next_prime_above(2) == 3
    n, s = 64, 64
    p = next_prime_above(n * s * s)
    assert is_prime(p) and p > n * s * s


def test_budget_monotone():
    budgets = [prime_budget(k, 256, 2.0) for k in (1, 2, 4, 8, 16)]
    assert budgets == sorted(budgets)
