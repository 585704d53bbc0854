"""Exception hierarchy shared by all correctors and the verifier."""


class MatCorrectError(Exception):
    """Base class for all library errors."""


class DimMismatch(MatCorrectError):
    """Matrix or vector dimensions do not agree."""


class LengthMismatch(DimMismatch):
    """Vector lengths differ in a dot product."""


class IndexOutOfRange(MatCorrectError):
    """Row or column index outside the matrix."""


class EmptyStrip(MatCorrectError):
    """A strip test was requested for an empty column set (caller logic bug)."""


class NoErrorFound(MatCorrectError):
    """Single-error correction found no mismatching coordinate."""


class MultipleRowsFlagged(MatCorrectError):
    """Single-error correction flagged more than one coordinate; the
    single-error precondition is violated."""


class BudgetExceeded(MatCorrectError):
    """Deterministic correction finished its prime budget but the product
    still fails verification; the true error count exceeded k."""


class StalledTooLong(MatCorrectError):
    """A randomized corrector made no progress for too many consecutive
    rounds, which signals a violated exact-k precondition."""


class MajorityFailure(MatCorrectError):
    """No value reached a strict majority among the sketch coefficients of
    some cell."""

    def __init__(self, row: int, col: int):
        super().__init__(f"no strict majority for cell ({row}, {col})")
        self.row = row
        self.col = col


class RetriesExhausted(MatCorrectError):
    """Sketch correction failed for every allowed retry."""


class KTooLarge(MatCorrectError):
    """Requested error count exceeds the number of matrix cells."""
