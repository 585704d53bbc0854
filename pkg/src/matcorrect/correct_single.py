"""Deterministic correction of a product with exactly one erroneous entry,
for general p x q times q x r shapes, in O(pq + qr + pr) ring operations.

The row is located by the all-ones test on (A, B, C'); the column by the
all-ones test on the transposes.  With one error no cancellation is
possible, so both tests flag exactly one coordinate.
"""

from __future__ import annotations

from .corrections import Correction
from .errors import MultipleRowsFlagged, NoErrorFound
from .matrix import Matrix, recompute_entry, recompute_row, transpose
from .verifier import all_ones_vector, mismatch_rows


def correct_single_error(
    a: Matrix, b: Matrix, c_err: Matrix, recompute_whole_row: bool = False
) -> tuple[Matrix, Correction]:
    """Locate and fix the single wrong entry of c_err.

    ``recompute_whole_row`` recomputes the full flagged row instead of the
    one located entry (same result, linear extra cost in r).
    """
    rows = mismatch_rows(a, b, c_err, all_ones_vector(c_err.cols))
    if len(rows) == 0:
        raise NoErrorFound("all-ones row test found no mismatch")
    if len(rows) > 1:
        raise MultipleRowsFlagged(f"rows {list(map(int, rows))} flagged")
    i = int(rows[0])

    cols = mismatch_rows(
        transpose(b), transpose(a), transpose(c_err), all_ones_vector(c_err.rows)
    )
    if len(cols) == 0:
        raise NoErrorFound("all-ones column test found no mismatch")
    if len(cols) > 1:
        raise MultipleRowsFlagged(f"columns {list(map(int, cols))} flagged")
    j = int(cols[0])

    fixed = c_err.copy()
    old = fixed.get(i, j)
    if recompute_whole_row:
        fixed.data[i, :] = recompute_row(a, b, i)
        new = fixed.get(i, j)
    else:
        new = recompute_entry(a, b, i, j)
        fixed.set_entry(i, j, new)
    if new == old:
        raise NoErrorFound(f"flagged cell ({i}, {j}) already held the true value")
    return fixed, Correction(row=i, col=j, old_value=old, new_value=new)
