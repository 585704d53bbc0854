"""Freivalds-style product tests: randomized full rounds, the
deterministic all-ones test, and strip-restricted variants.

Every test compares A(Bv^T) against C'v^T coordinate-wise, never forming
A*B, so a single test costs O(n^2) ring operations regardless of how many
columns the strip selects.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimMismatch, EmptyStrip
from .instrumentation import CountingRng
from .matrix import Matrix, mat_mat, mat_vec
from .primes import ResidueStrip


def _check_dims(a: Matrix, b: Matrix, c: Matrix) -> None:
    if a.cols != b.rows or a.rows != c.rows or b.cols != c.cols:
        raise DimMismatch(
            f"A {a.rows}x{a.cols}, B {b.rows}x{b.cols}, C' {c.rows}x{c.cols}"
        )


def mismatch_rows(a: Matrix, b: Matrix, c: Matrix, v) -> np.ndarray:
    """Sorted rows where A(Bv^T) and C'v^T differ."""
    _check_dims(a, b, c)
    left = mat_vec(a, mat_vec(b, v))
    right = mat_vec(c, v)
    return np.flatnonzero(left != right)


def all_ones_vector(length: int) -> np.ndarray:
    return np.ones(length, dtype=np.int64)


def strip_vector(length: int, strip: ResidueStrip | np.ndarray) -> np.ndarray:
    members = strip.members if isinstance(strip, ResidueStrip) else np.asarray(strip)
    v = np.zeros(length, dtype=np.int64)
    v[members] = 1
    return v


def random_strip_vector(
    length: int, strip: ResidueStrip | np.ndarray, rng: CountingRng
) -> np.ndarray:
    """0 outside the strip; an independent fair bit on each strip column."""
    members = strip.members if isinstance(strip, ResidueStrip) else np.asarray(strip)
    v = np.zeros(length, dtype=np.int64)
    v[members] = rng.bit_vector(len(members))
    return v


def full_random_vector(length: int, rng: CountingRng) -> np.ndarray:
    return rng.bit_vector(length)


def freivalds_rounds(
    a: Matrix, b: Matrix, c: Matrix, rounds: int, rng: CountingRng
) -> np.ndarray:
    """Union over independent random 0/1 vectors of per-round mismatch rows."""
    _check_dims(a, b, c)
    flagged: set[int] = set()
    for _ in range(rounds):
        v = full_random_vector(c.cols, rng)
        flagged.update(int(i) for i in mismatch_rows(a, b, c, v))
    return np.array(sorted(flagged), dtype=np.int64)


def test_strip(
    a: Matrix,
    b: Matrix,
    c: Matrix,
    strip: ResidueStrip | np.ndarray,
    randomized: bool = False,
    rng: CountingRng | None = None,
) -> np.ndarray:
    """Rows whose strip-restricted defect sum is nonzero.

    With the deterministic vector, any row holding exactly one erroneous
    entry inside the strip is flagged; two in-strip errors in the same row
    can cancel, which is exactly what the prime separation machinery works
    around.
    """
    members = strip.members if isinstance(strip, ResidueStrip) else np.asarray(strip)
    if len(members) == 0:
        raise EmptyStrip("strip has no columns")
    if randomized:
        if rng is None:
            raise ValueError("randomized strip test needs an rng")
        v = random_strip_vector(c.cols, members, rng)
    else:
        v = strip_vector(c.cols, members)
    return mismatch_rows(a, b, c, v)


def test_strips_batch(
    a: Matrix, b: Matrix, c: Matrix, strips: list[ResidueStrip]
) -> list[np.ndarray]:
    """Deterministic strip tests for many strips at once.

    One stacked matrix product keeps interpreter overhead off the hot
    path; the counted cost is identical to testing each strip separately.
    A strip test costs a full O(n^2) regardless of how many columns the
    strip holds, so strips with no member columns are still charged — the
    residue partition for a prime p always pays for p tests.
    """
    _check_dims(a, b, c)
    if not strips:
        return []
    vmat = np.zeros((c.cols, len(strips)), dtype=np.int64)
    for col, s in enumerate(strips):
        vmat[s.members, col] = 1
    if c.ctx.dtype == object:
        vmat = vmat.astype(object)
    else:
        vmat = vmat.astype(c.ctx.dtype)
    w = mat_mat(b, vmat)
    left = mat_mat(a, w)
    right = mat_mat(c, vmat)
    diff = left != right
    return [np.flatnonzero(diff[:, col]) for col in range(len(strips))]


def default_rounds(n: int, c_rounds: int = 3) -> int:
    """c * ceil(log2 n) rounds; at least one round for degenerate sizes."""
    return max(1, c_rounds * math.ceil(math.log2(max(n, 2))))


def verify_product(
    a: Matrix,
    b: Matrix,
    c: Matrix,
    rounds: int | None = None,
    rng: CountingRng | None = None,
) -> bool:
    """True iff no round flags any row.

    No false negatives are possible; each erroneous row survives a round
    with probability at most 1/2, so false positives vanish geometrically
    in the round count.
    """
    _check_dims(a, b, c)
    if c.rows == 0 or c.cols == 0:
        return True
    if rounds is None:
        rounds = default_rounds(c.cols)
    if rng is None:
        rng = CountingRng(0x5EED)
    for _ in range(rounds):
        v = full_random_vector(c.cols, rng)
        if len(mismatch_rows(a, b, c, v)):
            return False
    return True
