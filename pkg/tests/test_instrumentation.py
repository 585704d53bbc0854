from matcorrect import instrumentation
from matcorrect.instrumentation import CountingRng, count_mults


def test_mult_counter_roundtrip():
    instrumentation.reset_mults()
    count_mults(3)
    count_mults(4)
    assert instrumentation.mults() == 7
    instrumentation.reset_mults()
    assert instrumentation.mults() == 0


def test_getrandbits_ledger():
    rng = CountingRng(1)
    rng.getrandbits(5)
    assert rng.bits_used == 5
    rng.getrandbits(0)
    assert rng.bits_used == 5
    rng.bit()
    assert rng.bits_used == 6


def test_bit_vector_cost_and_values():
    rng = CountingRng(0)
    v = rng.bit_vector(7)
    assert rng.bits_used == 7
    assert len(v) == 7
    assert set(int(x) for x in v) <= {0, 1}
    assert len(rng.bit_vector(0)) == 0
    assert rng.bits_used == 7


def test_randrange_rejection_bits():
    # Range 5 needs 3-bit words; seed 123 accepts the first draw.
    rng = CountingRng(123)
    value, bits = rng.randrange_with_bits(5)
    assert (value, bits) == (0, 3)
    assert rng.bits_used == 3
    # Degenerate range costs nothing.
    assert CountingRng(0).randrange_with_bits(1) == (0, 0)


def test_randrange_uniform_support():
    rng = CountingRng(7)
    seen = {rng.randrange(5) for _ in range(200)}
    assert seen == {0, 1, 2, 3, 4}


def test_determinism_and_spawn():
    a, b = CountingRng(99), CountingRng(99)
    assert [a.getrandbits(16) for _ in range(10)] == [b.getrandbits(16) for _ in range(10)]
    child = a.spawn(0)
    assert child.bits_used == 0
    assert child.seed != a.seed
