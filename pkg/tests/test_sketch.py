import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matcorrect.errors import MajorityFailure, RetriesExhausted
from matcorrect.harness import PATTERNS, generate_instance
from matcorrect.instrumentation import CountingRng
from matcorrect.ring import RingContext
from matcorrect.sketch import (
    SketchParams,
    bucket_count_for,
    build_sketch,
    correct_compressed,
    poly_multiply,
    recover_corrections,
    repetitions_for,
    sample_hash_pairs,
)

CTX = RingContext(1_000_003)


def test_poly_multiply_oracle(mod1m):
    # (1 + 2x)(3 + 4x) = 3 + 10x + 8x^2
    out = poly_multiply(mod1m.array([1, 2]), mod1m.array([3, 4]), mod1m)
    assert out.tolist() == [3, 10, 8]


def test_poly_multiply_reduces(mod7):
    out = poly_multiply(mod7.array([3, 4]), mod7.array([5, 6]), mod7)
    # 15, 18+20, 24 -> 1, 3, 3 mod 7
    assert out.tolist() == [1, 3, 3]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 10**9), min_size=1, max_size=40),
       st.lists(st.integers(0, 10**9), min_size=1, max_size=40))
def test_karatsuba_matches_schoolbook(p, q):
    for ctx in (RingContext(1_000_003), RingContext(0)):
        pa, qa = ctx.array(p), ctx.array(q)
        school = poly_multiply(pa, qa, ctx, backend="schoolbook")
        kara = poly_multiply(pa, qa, ctx, backend="karatsuba")
        assert [int(x) for x in school] == [int(x) for x in kara]


def test_hash_pair_ranges():
    pairs = sample_hash_pairs(5, 8, 32, CountingRng(0))
    assert len(pairs) == 5
    for pair in pairs:
        assert pair.p_mod > 32 * 8 * 8
        gv, hv = pair.g_values(32), pair.h_values(32)
        assert gv.min() >= 1 and gv.max() <= 8
        assert hv.min() >= 1 and hv.max() <= 8


def test_parameter_defaults():
    assert bucket_count_for(0) == 16
    assert bucket_count_for(8) == 64
    t = repetitions_for(64)
    assert t % 2 == 1 and t >= 6 * 6


def test_sketch_identity_small(mod7):
    # Every coefficient must equal the sum, over cells hashing to its
    # exponent, of (true - erroneous); checked by direct enumeration.
    n, s = 4, 3
    inst = generate_instance(n, 3, mod7, seed=5)
    pairs = sample_hash_pairs(2, s, n, CountingRng(42))
    sk = build_sketch(inst.a, inst.b, inst.c_err, pairs, s)
    for pair, poly in zip(sk.pairs, sk.polys):
        gv, hv = pair.g_values(n), pair.h_values(n)
        expected = [0] * (2 * s + 1)
        for i in range(n):
            for j in range(n):
                d = mod7.sub(inst.c_true.get(i, j), inst.c_err.get(i, j))
                e = int(gv[i] + hv[j])
                expected[e] = mod7.add(expected[e], d)
        assert [int(v) for v in poly] == expected


def test_recover_on_collision_free_instance():
    inst = generate_instance(16, 2, CTX, seed=7)
    s = bucket_count_for(2)
    pairs = sample_hash_pairs(repetitions_for(16), s, 16, CountingRng(1))
    sk = build_sketch(inst.a, inst.b, inst.c_err, pairs, s)
    fixed, report = recover_corrections(sk, inst.c_err)
    assert fixed.equals(inst.c_true)
    assert report.cells == {(i, j) for (i, j, _) in inst.injected}


def test_majority_failure_reports_cell():
    # Two buckets for four errors and only two repetitions: collisions make
    # some cell read two different values, so no strict majority exists.
    inst = generate_instance(8, 4, CTX, seed=0)
    pairs = sample_hash_pairs(2, 2, 8, CountingRng(0))
    sk = build_sketch(inst.a, inst.b, inst.c_err, pairs, 2)
    with pytest.raises(MajorityFailure) as exc:
        recover_corrections(sk, inst.c_err)
    assert 0 <= exc.value.row < 8 and 0 <= exc.value.col < 8


@pytest.mark.parametrize("pattern", PATTERNS)
def test_correct_compressed_known_k(pattern):
    inst = generate_instance(16, 6, CTX, seed=11, pattern=pattern)
    fixed, _ = correct_compressed(inst.a, inst.b, inst.c_err, 6, CountingRng(13))
    assert fixed.equals(inst.c_true)


def test_correct_compressed_unknown_k():
    inst = generate_instance(16, 9, CTX, seed=13)
    fixed, report = correct_compressed(inst.a, inst.b, inst.c_err, None,
                                       CountingRng(17))
    assert fixed.equals(inst.c_true)
    assert report.iterations >= 1


def test_correct_compressed_wrap64():
    ctx = RingContext(0)
    inst = generate_instance(12, 4, ctx, seed=3, pattern="cancelling")
    fixed, _ = correct_compressed(inst.a, inst.b, inst.c_err, 4, CountingRng(5))
    assert fixed.equals(inst.c_true)


def test_retries_exhausted():
    inst = generate_instance(8, 6, CTX, seed=21)
    params = SketchParams(s=1, t=3, retries=1)  # far too few buckets
    with pytest.raises(RetriesExhausted):
        correct_compressed(inst.a, inst.b, inst.c_err, 6, CountingRng(1),
                           params=params)


def test_backends_agree_end_to_end():
    inst = generate_instance(12, 3, CTX, seed=15)
    out = {}
    for backend in ("schoolbook", "karatsuba"):
        fixed, _ = correct_compressed(inst.a, inst.b, inst.c_err, 3,
                                      CountingRng(19), backend=backend)
        out[backend] = fixed
    assert out["schoolbook"].equals(out["karatsuba"])
