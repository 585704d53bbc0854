"""Randomized correction by row/column filtering plus strip tests.

Stage 1 filters the erroneous rows and columns with repeated Freivalds
rounds; their intersection is a small submatrix that almost surely holds
every error.  Stage 2 splits that submatrix into contiguous column strips
and repairs the rows each randomized strip test flags.

Two entry points: unknown error count (guess, quadruple on overflow,
verify at the end) and exactly-known error count (single tests per
iteration, terminate by exact correction counting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corrections import Correction, ErrorReport
from .errors import DimMismatch, StalledTooLong
from .instrumentation import CountingRng
from .matrix import Matrix, extract_cols, extract_rows, recompute_entry, recompute_row, transpose
from .verifier import freivalds_rounds, mismatch_rows, full_random_vector, random_strip_vector, verify_product

DEFAULT_STALL_LIMIT = 64


@dataclass
class RandConfig:
    c_rounds: int = 3
    confidence_alpha: float = 1.0
    k_known: int | None = None

    def __post_init__(self) -> None:
        if self.c_rounds < 1:
            raise ValueError("c_rounds must be >= 1")


def _require_square(a: Matrix, b: Matrix, c: Matrix) -> int:
    if not (a.rows == a.cols == b.rows == b.cols == c.rows == c.cols):
        raise DimMismatch("randomized correction expects square n x n inputs")
    return c.rows


def _partition_contiguous(indices: np.ndarray, parts: int) -> list[np.ndarray]:
    """Split an ordered index set into near-equal contiguous runs."""
    parts = max(1, min(parts, len(indices)))
    return [seg for seg in np.array_split(indices, parts) if len(seg)]


def _recompute_cells(
    a: Matrix, b: Matrix, work: Matrix, cells, report: ErrorReport
) -> int:
    genuine = 0
    for i, j in cells:
        new = recompute_entry(a, b, i, j)
        old = work.get(i, j)
        if new != old:
            work.set_entry(i, j, new)
            report.record(Correction(row=i, col=j, old_value=old, new_value=new))
            genuine += 1
    return genuine


def _fix_rows(a: Matrix, b: Matrix, work: Matrix, rows, report: ErrorReport) -> int:
    genuine = 0
    for i in rows:
        i = int(i)
        fresh = recompute_row(a, b, i)
        for j in range(work.cols):
            old = work.get(i, j)
            new = int(fresh[j])
            if new != old:
                work.set_entry(i, j, new)
                report.record(Correction(row=i, col=j, old_value=old, new_value=new))
                genuine += 1
    return genuine


def _scan_strips(
    a1: Matrix,
    b1: Matrix,
    c1: Matrix,
    strips: list[np.ndarray],
    rounds: int,
    rng: CountingRng,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Randomized strip tests; returns (strip columns, flagged local rows)."""
    found = []
    for strip in strips:
        flagged: set[int] = set()
        for _ in range(rounds):
            v = random_strip_vector(c1.cols, strip, rng)
            flagged.update(int(i) for i in mismatch_rows(a1, b1, c1, v))
        found.append((strip, np.array(sorted(flagged), dtype=np.int64)))
    return found


def correct_rand_unknown(
    a: Matrix, b: Matrix, c_err: Matrix, cfg: RandConfig, rng: CountingRng
) -> tuple[Matrix, ErrorReport]:
    n = _require_square(a, b, c_err)
    work = c_err.copy()
    report = ErrorReport()
    if n == 0:
        return work, report

    log_n = max(1, math.ceil(math.log2(max(n, 2))))
    rounds = cfg.c_rounds * log_n
    at, bt = transpose(a), transpose(b)

    while True:
        report.iterations += 1

        # Stage 1: filter erroneous rows, with a cheap exit for few rows.
        r_idx = freivalds_rounds(a, b, work, rounds, rng)
        if len(r_idx) == 0:
            if verify_product(a, b, work, rounds, rng):
                return work, report
            report.restarts += 1
            continue
        if len(r_idx) <= log_n or n < 4:
            _fix_rows(a, b, work, r_idx, report)
            if verify_product(a, b, work, rounds, rng):
                return work, report
            report.restarts += 1
            continue

        workt = transpose(work)
        l_idx = freivalds_rounds(bt, at, workt, rounds, rng)
        if len(l_idx) == 0:
            if verify_product(a, b, work, rounds, rng):
                return work, report
            report.restarts += 1
            continue
        if len(l_idx) <= log_n:
            fixed_t = ErrorReport()
            _fix_rows(bt, at, workt, l_idx, fixed_t)
            work = transpose(workt)
            for corr in fixed_t.corrections:
                report.record(
                    Correction(corr.col, corr.row, corr.old_value, corr.new_value)
                )
            if verify_product(a, b, work, rounds, rng):
                return work, report
            report.restarts += 1
            continue

        # Stage 2: strip tests on the intersection submatrix.
        a1 = extract_rows(a, r_idx)
        b1 = extract_cols(b, l_idx)
        k_prime = max(len(r_idx), len(l_idx), 4)
        stage_done = False
        while not stage_done:
            c1 = Matrix(work.ctx, work.data[np.ix_(r_idx, l_idx)].copy())
            parts = max(1, math.ceil(math.sqrt(k_prime / log_n)))
            strips = _partition_contiguous(np.arange(len(l_idx)), parts)
            found = _scan_strips(a1, b1, c1, strips, rounds, rng)
            strip_rows = sum(len(rows) for _, rows in found)
            if strip_rows > k_prime:
                # Too many flagged strip rows: abandon without correcting.
                k_prime *= 4
                report.restarts += 1
                continue
            cells = [
                (int(r_idx[i]), int(l_idx[j]))
                for strip, rows in found
                for i in rows
                for j in strip
            ]
            _recompute_cells(a, b, work, cells, report)
            if verify_product(a, b, work, rounds, rng):
                return work, report
            report.restarts += 1
            k_prime *= 4
            if k_prime > 4 * n * n:
                # Errors escaped the stage-1 filter; refresh R and L.
                stage_done = True


def correct_rand_known(
    a: Matrix,
    b: Matrix,
    c_err: Matrix,
    k_exact: int,
    rng: CountingRng,
    stall_limit: int = DEFAULT_STALL_LIMIT,
) -> tuple[Matrix, ErrorReport]:
    n = _require_square(a, b, c_err)
    work = c_err.copy()
    report = ErrorReport()
    if n == 0 or k_exact == 0:
        return work, report

    at, bt = transpose(a), transpose(b)
    k_remaining = k_exact
    stalled = 0
    while k_remaining > 0:
        report.iterations += 1
        r_idx = mismatch_rows(a, b, work, full_random_vector(n, rng))
        workt = transpose(work)
        l_idx = mismatch_rows(bt, at, workt, full_random_vector(n, rng))
        genuine = 0
        if len(r_idx) and len(l_idx):
            a1 = extract_rows(a, r_idx)
            b1 = extract_cols(b, l_idx)
            c1 = Matrix(work.ctx, work.data[np.ix_(r_idx, l_idx)].copy())
            parts = max(1, math.ceil(math.sqrt(k_remaining)))
            strips = _partition_contiguous(np.arange(len(l_idx)), parts)
            cells = []
            for strip in strips:
                v = random_strip_vector(c1.cols, strip, rng)
                for i in mismatch_rows(a1, b1, c1, v):
                    cells.extend(
                        (int(r_idx[int(i)]), int(l_idx[int(j)])) for j in strip
                    )
            genuine = _recompute_cells(a, b, work, cells, report)
        k_remaining -= genuine
        stalled = 0 if genuine else stalled + 1
        if stalled >= stall_limit:
            raise StalledTooLong(
                f"no corrections in {stall_limit} rounds; k={k_exact} is not exact"
            )
    return work, report
