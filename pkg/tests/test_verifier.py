import numpy as np
import pytest

from matcorrect import instrumentation
from matcorrect.errors import DimMismatch, EmptyStrip
from matcorrect.harness import generate_instance
from matcorrect.instrumentation import CountingRng
from matcorrect.matrix import Matrix
from matcorrect.primes import residue_strips
from matcorrect.ring import RingContext
from matcorrect.verifier import (
    all_ones_vector,
    default_rounds,
    freivalds_rounds,
    mismatch_rows,
    strip_vector,
    verify_product,
)
from matcorrect.verifier import test_strip as strip_test
from matcorrect.verifier import test_strips_batch as strips_batch

CTX = RingContext(1_000_003)


def _instance(n, k, seed=0, pattern="uniform"):
    return generate_instance(n, k, CTX, seed, pattern)


def test_all_ones_flags_single_error():
    inst = _instance(8, 1, seed=1)
    (i, j, d) = next(iter(inst.injected))
    rows = mismatch_rows(inst.a, inst.b, inst.c_err, all_ones_vector(8))
    assert rows.tolist() == [i]


def test_all_ones_misses_cancellation(mod7):
    # Row 0 holds deltas +3 and -3: the all-ones sum cancels exactly.
    a = Matrix.identity(2, mod7)
    b = Matrix.from_rows([[1, 2], [3, 4]], mod7)
    c = b.copy()
    c.set_entry(0, 0, mod7.add(c.get(0, 0), 3))
    c.set_entry(0, 1, mod7.add(c.get(0, 1), mod7.neg(3)))
    assert mismatch_rows(a, b, c, all_ones_vector(2)).tolist() == []
    # A strip isolating column 0 still catches it.
    assert strip_test(a, b, c, np.array([0])).tolist() == [0]


def test_verify_product_completeness():
    inst = _instance(8, 0)
    assert verify_product(inst.a, inst.b, inst.c_true)


def test_verify_product_detects_errors():
    for k in (1, 3, 8):
        inst = _instance(8, k, seed=k)
        assert not verify_product(inst.a, inst.b, inst.c_err, rounds=64,
                                  rng=CountingRng(5))


def test_freivalds_rounds_covers_erroneous_rows():
    inst = _instance(16, 6, seed=2)
    err_rows = sorted({i for (i, _, _) in inst.injected})
    flagged = freivalds_rounds(inst.a, inst.b, inst.c_err, 64, CountingRng(3))
    assert set(flagged.tolist()) <= set(err_rows)
    assert set(flagged.tolist()) == set(err_rows)  # 64 rounds: miss prob 2^-64 per row


def test_strip_vector_and_empty():
    v = strip_vector(6, np.array([1, 4]))
    assert v.tolist() == [0, 1, 0, 0, 1, 0]
    inst = _instance(4, 0)
    with pytest.raises(EmptyStrip):
        strip_test(inst.a, inst.b, inst.c_true, np.array([], dtype=np.int64))


def test_batch_matches_single_strip_tests():
    inst = _instance(12, 5, seed=7)
    strips = residue_strips(12, 5)
    batch = strips_batch(inst.a, inst.b, inst.c_err, strips)
    for strip, rows in zip(strips, batch):
        assert rows.tolist() == strip_test(inst.a, inst.b, inst.c_err, strip).tolist()


def test_batch_charges_every_strip():
    # A prime larger than n yields empty residue classes, which still cost
    # a full O(n^2) test each: the residue partition always pays p tests.
    inst = _instance(6, 0)
    strips = residue_strips(6, 7)
    instrumentation.reset_mults()
    strips_batch(inst.a, inst.b, inst.c_true, strips)
    assert instrumentation.mults() == 3 * 7 * 36


def test_default_rounds():
    assert default_rounds(64) == 18
    # Degenerate sizes are floored at n=2, i.e. one bit of dimension.
    assert default_rounds(1) == 3
    assert default_rounds(2, c_rounds=5) == 5


def test_dim_mismatch():
    with pytest.raises(DimMismatch):
        verify_product(Matrix.zeros(2, 2, CTX), Matrix.zeros(3, 2, CTX),
                       Matrix.zeros(2, 2, CTX))


def test_single_round_detection_rate():
    # Each erroneous row escapes one random 0/1 round with probability <= 1/2.
    hits = 0
    trials = 400
    inst = _instance(8, 1, seed=11)
    rng = CountingRng(17)
    for _ in range(trials):
        v = rng.bit_vector(8)
        hits += bool(len(mismatch_rows(inst.a, inst.b, inst.c_err, v)))
    assert hits / trials >= 0.4
