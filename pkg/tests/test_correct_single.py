import pytest

from matcorrect import instrumentation
from matcorrect.correct_single import correct_single_error
from matcorrect.errors import MultipleRowsFlagged, NoErrorFound
from matcorrect.harness import generate_instance, generate_rect_instance
from matcorrect.ring import RingContext


def test_corrects_single_error(any_ctx):
    inst = generate_instance(8, 1, any_ctx, seed=3)
    fixed, corr = correct_single_error(inst.a, inst.b, inst.c_err)
    assert fixed.equals(inst.c_true)
    (i, j, _) = next(iter(inst.injected))
    assert (corr.row, corr.col) == (i, j)
    assert corr.new_value == inst.c_true.get(i, j)


def test_rectangular_and_cost_bound():
    ctx = RingContext(1_000_003)
    for seed, (p, q, r) in enumerate([(3, 9, 5), (17, 2, 31), (64, 64, 64)]):
        inst = generate_rect_instance(p, q, r, 1, ctx, seed)
        instrumentation.reset_mults()
        fixed, _ = correct_single_error(inst.a, inst.b, inst.c_err)
        assert fixed.equals(inst.c_true)
        assert instrumentation.mults() <= 4 * (p * q + q * r + p * r)


def test_no_error_raises(mod1m):
    inst = generate_instance(6, 0, mod1m, seed=0)
    with pytest.raises(NoErrorFound):
        correct_single_error(inst.a, inst.b, inst.c_true)


def test_two_row_errors_rejected(mod1m):
    # Errors in two distinct rows violate the single-error contract.
    inst = generate_instance(6, 0, mod1m, seed=1)
    c = inst.c_true.copy()
    c.set_entry(0, 0, mod1m.add(c.get(0, 0), 1))
    c.set_entry(3, 2, mod1m.add(c.get(3, 2), 5))
    with pytest.raises(MultipleRowsFlagged):
        correct_single_error(inst.a, inst.b, c)


def test_whole_row_mode(mod1m):
    inst = generate_instance(8, 1, mod1m, seed=9)
    fixed, _ = correct_single_error(inst.a, inst.b, inst.c_err,
                                    recompute_whole_row=True)
    assert fixed.equals(inst.c_true)


def test_input_not_mutated(mod1m):
    inst = generate_instance(5, 1, mod1m, seed=4)
    before = inst.c_err.copy()
    correct_single_error(inst.a, inst.b, inst.c_err)
    assert inst.c_err.equals(before)
