"""Correction with exactly k errors using very few random bits.

Instead of sweeping the full prime budget, each round draws one random
prime from a four-fold budget for ceil(sqrt(k_remaining)) indices, runs a
column pass with it, then repeats on the transposes for the row view.
Every 1-detectable entry is fixed per round with constant probability, so
the remaining-error count decays geometrically.  The count is exact
because only recomputed values that genuinely differ are counted.
"""

from __future__ import annotations

import math

from .corrections import BitBudgetLedger, Correction, ErrorReport
from .errors import DimMismatch, StalledTooLong
from .instrumentation import CountingRng
from .matrix import Matrix, transpose
from .primes import first_primes, prime_budget
from .correct_deterministic import segment_pass

DEFAULT_STALL_LIMIT = 64


def draw_random_prime(
    primes: list[int], rng: CountingRng, ledger: BitBudgetLedger | None = None
) -> tuple[int, int]:
    """Uniform prime from the list via rejection sampling on whole bit words.

    Returns (prime, bits_used); the exact bit cost is ledgered.
    """
    idx, bits = rng.randrange_with_bits(len(primes))
    if ledger is not None:
        ledger.log(idx, bits)
    return primes[idx], bits


def correct_fewbits(
    a: Matrix,
    b: Matrix,
    c_err: Matrix,
    k_exact: int,
    rng: CountingRng,
    c_sep: float = 2.0,
    stall_limit: int = DEFAULT_STALL_LIMIT,
) -> tuple[Matrix, ErrorReport, BitBudgetLedger]:
    n = c_err.rows
    if not (a.rows == a.cols == b.rows == b.cols == c_err.rows == c_err.cols):
        raise DimMismatch("few-bits correction expects square n x n inputs")
    work = c_err.copy()
    report = ErrorReport()
    ledger = BitBudgetLedger()
    if k_exact == 0 or n == 0:
        return work, report, ledger

    at, bt = transpose(a), transpose(b)
    k_remaining = k_exact
    done_cells: set[tuple[int, int]] = set()
    done_cells_t: set[tuple[int, int]] = set()
    stalled = 0
    while k_remaining > 0:
        report.iterations += 1
        budget = 4 * prime_budget(
            math.ceil(math.sqrt(k_remaining)), max(n, 2), c_sep
        )
        primes = first_primes(budget)

        # Column view.
        p, _ = draw_random_prime(primes, rng, ledger)
        fixed = segment_pass(a, b, work, p, done_cells, report.record)

        # Row view on the transposed product.
        workt = transpose(work)

        def record_flipped(corr: Correction) -> None:
            report.record(
                Correction(
                    row=corr.col,
                    col=corr.row,
                    old_value=corr.old_value,
                    new_value=corr.new_value,
                )
            )

        p, _ = draw_random_prime(primes, rng, ledger)
        fixed += segment_pass(bt, at, workt, p, done_cells_t, record_flipped)
        work = transpose(workt)

        k_remaining -= fixed
        stalled = 0 if fixed else stalled + 1
        if stalled >= stall_limit:
            raise StalledTooLong(
                f"no corrections in {stall_limit} rounds; k={k_exact} is not exact"
            )
    return work, report, ledger
