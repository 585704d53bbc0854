"""Algebraic correction via compressed difference polynomials.

t independent hash pairs bucket rows and columns into s bins; for each
pair the difference polynomial aggregates, per exponent, the error deltas
of all cells hashing there.  A cell's correction term is recovered as the
strict majority of its t coefficients; a fresh draw of hash pairs retries
any run where some cell has no majority or the repaired product fails
verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corrections import Correction, ErrorReport
from .errors import DimMismatch, MajorityFailure, RetriesExhausted
from .instrumentation import CountingRng, count_mults
from .matrix import Matrix
from .primes import next_prime_above
from .verifier import default_rounds, verify_product


@dataclass(frozen=True)
class HashPair:
    """Affine mod-P-then-mod-s hash pair g, h : {1..n} -> {1..s}."""

    a_g: int
    b_g: int
    a_h: int
    b_h: int
    p_mod: int
    s: int

    def g_values(self, n: int) -> np.ndarray:
        x = np.arange(1, n + 1, dtype=object)
        return ((self.a_g * x + self.b_g) % self.p_mod % self.s + 1).astype(np.int64)

    def h_values(self, n: int) -> np.ndarray:
        x = np.arange(1, n + 1, dtype=object)
        return ((self.a_h * x + self.b_h) % self.p_mod % self.s + 1).astype(np.int64)


@dataclass
class SketchParams:
    s: int | None = None
    t: int | None = None
    retries: int = 3


@dataclass
class Sketch:
    s: int
    pairs: list[HashPair]
    polys: list[np.ndarray]  # coefficient index = exponent, length 2s+1

    @property
    def t(self) -> int:
        return len(self.pairs)


def bucket_count_for(k: int) -> int:
    """Bucket count from the error budget.

    Doubled relative to the minimum the collision analysis needs, because
    strict per-cell majorities must survive a union bound over all n^2
    cells at once.
    """
    return max(8 * k, 16)


def repetitions_for(n: int) -> int:
    """Smallest odd repetition count scaled with log n (see bucket_count_for)."""
    t = 6 * max(1, math.ceil(math.log2(max(n, 2))))
    return t + 1 if t % 2 == 0 else t


def sample_hash_pairs(
    t: int, s: int, n: int, rng: CountingRng
) -> list[HashPair]:
    """t independent pairs; parameters drawn fresh per pair."""
    if s < 1:
        raise ValueError("bucket count s must be >= 1")
    p_mod = next_prime_above(max(n * s * s, n, 2))
    pairs = []
    for _ in range(t):
        a_g = 1 + rng.randrange(p_mod - 1)
        b_g = rng.randrange(p_mod)
        a_h = 1 + rng.randrange(p_mod - 1)
        b_h = rng.randrange(p_mod)
        pairs.append(HashPair(a_g, b_g, a_h, b_h, p_mod, s))
    return pairs


def poly_multiply(p, q, ctx, backend: str = "schoolbook") -> np.ndarray:
    """Exact convolution over the ring; charges len(p)*len(q) multiplications."""
    p = np.asarray(p)
    q = np.asarray(q)
    count_mults(len(p) * len(q))
    if len(p) == 0 or len(q) == 0:
        return np.zeros(0, dtype=p.dtype)
    if backend == "schoolbook":
        return ctx.normalize(np.convolve(p, q))
    if backend == "karatsuba":
        out = _karatsuba(list(int(x) for x in p), list(int(x) for x in q))
        return ctx.array(out).reshape(-1)
    raise ValueError(f"unknown backend {backend!r}")


def _karatsuba(p: list[int], q: list[int]) -> list[int]:
    if len(p) <= 16 or len(q) <= 16:
        out = [0] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
        return out
    m = min(len(p), len(q)) // 2
    p0, p1 = p[:m], p[m:]
    q0, q1 = q[:m], q[m:]
    low = _karatsuba(p0, q0)
    high = _karatsuba(p1, q1)
    mid = _karatsuba(_poly_add(p0, p1), _poly_add(q0, q1))
    mid = _poly_sub(_poly_sub(mid, low), high)
    out = [0] * (len(p) + len(q) - 1)
    for i, v in enumerate(low):
        out[i] += v
    for i, v in enumerate(mid):
        out[i + m] += v
    for i, v in enumerate(high):
        out[i + 2 * m] += v
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return out


def _poly_sub(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return out


def _bucket_rows(values: np.ndarray, buckets: np.ndarray, s: int, ctx) -> np.ndarray:
    """Accumulate rows of `values` into bucket rows 1..s (row 0 unused)."""
    n_cols = values.shape[1]
    if ctx.dtype == object:
        acc = np.zeros((s + 1, n_cols), dtype=object)
    else:
        acc = np.zeros((s + 1, n_cols), dtype=ctx.dtype)
    np.add.at(acc, buckets, values)
    return ctx.normalize(acc)


def build_sketch(
    a: Matrix,
    b: Matrix,
    c_err: Matrix,
    pairs: list[HashPair],
    s: int,
    backend: str = "schoolbook",
) -> Sketch:
    """The t difference polynomials of the compressed product of A and B
    minus the compressed C'."""
    n = c_err.rows
    if not (a.rows == a.cols == b.rows == b.cols == c_err.rows == c_err.cols):
        raise DimMismatch("sketch expects square n x n inputs")
    ctx = c_err.ctx
    polys = []
    for pair in pairs:
        gv = pair.g_values(n)
        hv = pair.h_values(n)
        # Bucket polynomials: column k of A by g, row k of B by h.
        pa = _bucket_rows(a.data, gv, s, ctx)          # (s+1, n)
        pb = _bucket_rows(b.data.T, hv, s, ctx)        # (s+1, n)
        if ctx.dtype == object:
            acc = np.zeros(2 * s + 1, dtype=object)
        else:
            acc = np.zeros(2 * s + 1, dtype=ctx.dtype)
        for k in range(n):
            prod = poly_multiply(pa[:, k], pb[:, k], ctx, backend=backend)
            acc[: len(prod)] = acc[: len(prod)] + prod
            if ctx.dtype == np.int64:
                acc %= ctx.modulus
        # Subtract the compressed C' term.
        if ctx.dtype == object:
            neg = np.zeros(2 * s + 1, dtype=object)
        else:
            neg = np.zeros(2 * s + 1, dtype=ctx.dtype)
        exps = (gv[:, None] + hv[None, :]).ravel()
        np.add.at(neg, exps, c_err.data.ravel())
        polys.append(ctx.normalize(acc - neg))
    return Sketch(s=s, pairs=pairs, polys=polys)


def recover_corrections(
    sk: Sketch, c_err: Matrix, skip_all_zero: bool = False
) -> tuple[Matrix, ErrorReport]:
    """Majority-decode the correction term of every cell and apply it."""
    n = c_err.rows
    t = sk.t
    stack = np.empty((t, n, n), dtype=c_err.data.dtype)
    for idx, (pair, poly) in enumerate(zip(sk.pairs, sk.polys)):
        gv = pair.g_values(n)
        hv = pair.h_values(n)
        stack[idx] = poly[gv[:, None] + hv[None, :]]
    if skip_all_zero:
        zero = c_err.ctx.normalize(0)
        live = ~(stack == zero).all(axis=0)
    else:
        live = np.ones((n, n), dtype=bool)
    # For odd t a strict majority value, if it exists, sits in the middle
    # of the sorted column.
    ordered = np.sort(stack, axis=0)
    candidate = ordered[t // 2]
    counts = (stack == candidate).sum(axis=0)
    bad = live & (counts * 2 <= t)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise MajorityFailure(i, j)

    fixed = c_err.copy()
    report = ErrorReport()
    delta_nonzero = live & (candidate != c_err.ctx.normalize(0))
    for i, j in np.argwhere(delta_nonzero):
        i, j = int(i), int(j)
        old = fixed.get(i, j)
        new = fixed.ctx.add(old, int(candidate[i, j]))
        fixed.set_entry(i, j, new)
        report.record(Correction(row=i, col=j, old_value=old, new_value=new))
    return fixed, report


def correct_compressed(
    a: Matrix,
    b: Matrix,
    c_err: Matrix,
    k: int | None,
    rng: CountingRng,
    params: SketchParams | None = None,
    backend: str = "schoolbook",
) -> tuple[Matrix, ErrorReport]:
    """Sketch-based correction; retries with fresh hash pairs, and in
    unknown-k mode escalates the guess geometrically."""
    n = c_err.rows
    params = params or SketchParams()
    report = ErrorReport()
    if n == 0:
        return c_err.copy(), report
    t = params.t if params.t is not None else repetitions_for(n)
    rounds = default_rounds(n)

    if k is not None:
        guesses = [k]
    else:
        guesses = []
        guess = 4
        while True:
            guesses.append(guess)
            if guess >= n * n:
                break
            guess *= 4

    for guess in guesses:
        s = params.s if params.s is not None else bucket_count_for(guess)
        for _ in range(params.retries + 1):
            report.iterations += 1
            pairs = sample_hash_pairs(t, s, n, rng)
            sk = build_sketch(a, b, c_err, pairs, s, backend=backend)
            try:
                fixed, attempt_report = recover_corrections(sk, c_err)
            except MajorityFailure:
                report.restarts += 1
                continue
            if verify_product(a, b, fixed, rounds, rng):
                attempt_report.restarts = report.restarts
                attempt_report.iterations = report.iterations
                attempt_report.notes = report.notes
                return fixed, attempt_report
            report.restarts += 1
    raise RetriesExhausted(
        f"sketch correction failed after {report.iterations} attempts"
    )
