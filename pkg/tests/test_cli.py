import json

import pytest

from matcorrect.cli import main
from matcorrect.harness import STATS_FIELDS


@pytest.fixture
def files(tmp_path):
    def path(name):
        return str(tmp_path / name)
    return path


def _gen(path, n=8, k=2, seed=0, pattern="uniform", extra=()):
    return main([
        "gen", "--n", str(n), "--k", str(k), "--seed", str(seed),
        "--pattern", pattern,
        "--out-a", path("a"), "--out-b", path("b"),
        "--out-c", path("c"), "--out-truth", path("truth"),
        *extra,
    ])


def test_gen_k_zero_matches_truth(files):
    assert _gen(files, k=0) == 0
    assert open(files("c")).read() == open(files("truth")).read()


def test_gen_deterministic(files, tmp_path):
    assert _gen(files, seed=9) == 0
    first = open(files("a")).read()
    assert _gen(files, seed=9) == 0
    assert open(files("a")).read() == first


def test_gen_k_too_large(files, capsys):
    assert _gen(files, n=4, k=17) == 2
    assert "k exceeds n^2" in capsys.readouterr().err


def test_verify_exit_codes(files, capsys):
    assert _gen(files, k=1) == 0
    assert main(["verify", "--a", files("a"), "--b", files("b"),
                 "--c", files("truth")]) == 0
    assert main(["verify", "--a", files("a"), "--b", files("b"),
                 "--c", files("c"), "--rounds", "64"]) == 1
    out = capsys.readouterr().out
    assert "mismatch rows:" in out


def test_verify_dimension_mismatch(files, tmp_path):
    assert _gen(files, n=8, k=0) == 0
    other = str(tmp_path / "small")
    assert main(["gen", "--n", "4", "--k", "0", "--out-a", other,
                 "--out-b", other + "b", "--out-c", other + "c",
                 "--out-truth", other + "t"]) == 0
    assert main(["verify", "--a", files("a"), "--b", other + "b",
                 "--c", files("c")]) == 2


def test_missing_file_is_io_error(files):
    assert main(["verify", "--a", files("nope"), "--b", files("nope"),
                 "--c", files("nope")]) == 3


@pytest.mark.parametrize("algo,k", [
    ("single", None), ("det1", "3"), ("det2", "3"), ("fewbits", "3"),
    ("rand", None), ("randk", "3"), ("sketch", "3"), ("auto", None),
    ("auto", "3"),
])
def test_correct_round_trip(files, capsys, algo, k):
    n_err = 1 if algo == "single" else 3
    assert _gen(files, k=n_err, seed=4) == 0
    args = ["correct", "--algo", algo, "--a", files("a"), "--b", files("b"),
            "--c", files("c"), "--seed", "5", "--out", files("fixed")]
    if k is not None:
        args += ["--k", k]
    assert main(args) == 0
    assert open(files("fixed")).read() == open(files("truth")).read()
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert tuple(record) == STATS_FIELDS
    assert record["success"]
    if algo in ("single", "det1", "det2"):
        assert record["random_bits"] == 0


def test_correct_k_flag_contract(files, capsys):
    assert _gen(files, k=2) == 0
    base = ["correct", "--a", files("a"), "--b", files("b"), "--c", files("c"),
            "--out", files("fixed")]
    assert main(base + ["--algo", "fewbits"]) == 2
    assert "required" in capsys.readouterr().err
    assert main(base + ["--algo", "rand", "--k", "2"]) == 2
    assert main(base + ["--algo", "single", "--k", "1"]) == 2


def test_correct_failure_exit(files):
    # Two errors violate the single-error contract: exit 1, no silent pass.
    assert _gen(files, k=2, seed=8) == 0
    assert main(["correct", "--algo", "single", "--a", files("a"),
                 "--b", files("b"), "--c", files("c"),
                 "--out", files("fixed")]) == 1


def test_correct_det_zero_bits_stats(files, capsys):
    assert _gen(files, k=4, seed=2, pattern="cancelling") == 0
    assert main(["correct", "--algo", "det2", "--k", "4", "--a", files("a"),
                 "--b", files("b"), "--c", files("c"),
                 "--out", files("fixed")]) == 0
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record["random_bits"] == 0
    assert open(files("fixed")).read() == open(files("truth")).read()


def test_correct_reproducible(files, capsys):
    assert _gen(files, k=3, seed=6) == 0
    outputs = []
    for rerun in range(2):
        assert main(["correct", "--algo", "sketch", "--k", "3", "--seed", "21",
                     "--a", files("a"), "--b", files("b"), "--c", files("c"),
                     "--out", files(f"fixed{rerun}")]) == 0
        record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        record.pop("wall_ms")
        outputs.append((open(files(f"fixed{rerun}")).read(), record))
    assert outputs[0] == outputs[1]


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["correct", "--algo", "bogus"])
    assert exc.value.code == 2
