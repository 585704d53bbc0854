import pytest

from matcorrect.harness import generate_instance
from matcorrect.matrix import Matrix
from matcorrect.matrixio import FormatError, parse, read_file, serialize, write_file
from matcorrect.ring import RingContext


def test_serialize_oracle(mod7):
    m = Matrix.from_rows([[1, 2], [3, 4]], mod7)
    assert serialize(m) == "MPC1 2 2 7\n1 2\n3 4\n"


def test_round_trip(any_ctx):
    inst = generate_instance(6, 3, any_ctx, seed=1)
    for m in (inst.a, inst.c_err):
        again = parse(serialize(m))
        assert again.equals(m)
        assert serialize(again) == serialize(m)


def test_file_round_trip(tmp_path, mod1m):
    inst = generate_instance(5, 2, mod1m, seed=2)
    path = tmp_path / "m.txt"
    write_file(inst.c_err, str(path))
    assert read_file(str(path)).equals(inst.c_err)


def test_wrap64_header_zero(wrap64):
    m = Matrix.from_rows([[(1 << 64) - 1]], wrap64)
    text = serialize(m)
    assert text.splitlines()[0] == "MPC1 1 1 0"
    assert parse(text).equals(m)


@pytest.mark.parametrize("text", [
    "nope\n1\n",
    "MPC1 1 1\n1\n",
    "MPC1 2 1 7\n1\n",
    "MPC1 1 2 7\n1\n",
    "MPC1 1 1 7\n9\n",          # not canonical mod 7
    "MPC1 1 1 0\n18446744073709551616\n",  # 2^64 outside 64 bits
    "MPC1 x y 7\n1\n",
])
def test_malformed_rejected(text):
    with pytest.raises(FormatError):
        parse(text)
