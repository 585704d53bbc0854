"""Command-line surface: generate, verify, correct, and bench.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
failure.  All randomized subcommands are reproducible bit-exactly from
--seed; only the wall_ms stats field varies between reruns.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import instrumentation, matrixio
from .errors import DimMismatch, KTooLarge, MatCorrectError
from .harness import PATTERNS, STATS_FIELDS, generate_instance, run_algorithm
from .instrumentation import CountingRng
from .matrixio import FormatError
from .ring import RingContext
from .verifier import freivalds_rounds, verify_product

DEFAULT_MODULUS = 1_000_003

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

_K_REQUIRED = {"det1", "det2", "fewbits", "randk", "sketch"}
_K_FORBIDDEN = {"single", "rand"}


def _read(path: str):
    try:
        return matrixio.read_file(path)
    except FormatError as exc:
        raise _IoFailure(f"{path}: {exc}") from exc
    except OSError as exc:
        raise _IoFailure(f"{path}: {exc}") from exc


def _write(matrix, path: str) -> None:
    try:
        matrixio.write_file(matrix, path)
    except OSError as exc:
        raise _IoFailure(f"{path}: {exc}") from exc


class _IoFailure(Exception):
    pass


def cmd_gen(args: argparse.Namespace) -> int:
    if args.k > args.n * args.n:
        print("error: k exceeds n^2", file=sys.stderr)
        return EXIT_USAGE
    ctx = RingContext(args.mod)
    try:
        inst = generate_instance(args.n, args.k, ctx, args.seed, args.pattern)
    except KTooLarge:
        print("error: k exceeds n^2", file=sys.stderr)
        return EXIT_USAGE
    _write(inst.a, args.out_a)
    _write(inst.b, args.out_b)
    _write(inst.c_err, args.out_c)
    _write(inst.c_true, args.out_truth)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    a, b, c = _read(args.a), _read(args.b), _read(args.c)
    try:
        rows = freivalds_rounds(a, b, c, args.rounds, CountingRng(args.seed))
    except DimMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if len(rows):
        print("mismatch rows:", " ".join(str(int(i)) for i in rows))
        return EXIT_VERIFY_FAILED
    print("ok")
    return EXIT_OK


def cmd_correct(args: argparse.Namespace) -> int:
    algo = args.algo
    if algo == "auto":
        algo = "rand" if args.k is None else "sketch"
    if algo in _K_REQUIRED and args.k is None:
        print(f"error: --k is required for --algo {args.algo}", file=sys.stderr)
        return EXIT_USAGE
    if algo in _K_FORBIDDEN and args.k is not None:
        print(f"error: --k is not accepted for --algo {args.algo}", file=sys.stderr)
        return EXIT_USAGE
    a, b, c = _read(args.a), _read(args.b), _read(args.c)

    rng = None if algo in ("single", "det1", "det2") else CountingRng(args.seed)
    instrumentation.reset_mults()
    start = time.perf_counter()
    restarts = 0
    try:
        fixed, report = run_algorithm(algo, a, b, c, args.k, rng)
        restarts = report.restarts
        corrections = len(report.corrections)
    except DimMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatCorrectError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    wall_ms = (time.perf_counter() - start) * 1000.0

    success = verify_product(a, b, fixed, 64, CountingRng(args.seed ^ 0x5A5A5A))
    _write(fixed, args.out)
    record = {
        "algo": algo,
        "n": c.rows,
        "k_true": corrections,
        "k_param": args.k,
        "corrections": corrections,
        "ring_mults": instrumentation.mults(),
        "random_bits": rng.bits_used if rng is not None else 0,
        "restarts": restarts,
        "wall_ms": wall_ms,
        "success": success,
    }
    print(json.dumps({key: record[key] for key in STATS_FIELDS}))
    return EXIT_OK if success else EXIT_VERIFY_FAILED


def cmd_bench(args: argparse.Namespace) -> int:
    from . import acceptance  # heavy import kept off the fast paths
    from .harness import write_jsonl
    from .report import render_figures

    results, records = acceptance.run_suite(args.suite, seed=args.seed)
    try:
        write_jsonl(records, args.out)
    except OSError as exc:
        print(f"error: {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    plot_dir = args.plot_dir or os.path.join(
        os.path.dirname(os.path.abspath(args.out)), "figures"
    )
    figures = render_figures(records, plot_dir)
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.details}")
    print(f"stats: {args.out} ({len(records)} records)")
    for fig in figures:
        print(f"figure: {fig}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matcorrect",
        description="Verify and correct erroneous matrix products over exact rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance with injected errors")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--mod", type=int, default=DEFAULT_MODULUS,
                     help="ring modulus; 0 selects wrapping 64-bit arithmetic")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--pattern", choices=PATTERNS, default="uniform")
    gen.add_argument("--out-a", required=True)
    gen.add_argument("--out-b", required=True)
    gen.add_argument("--out-c", required=True)
    gen.add_argument("--out-truth", required=True)
    gen.set_defaults(fn=cmd_gen)

    ver = sub.add_parser("verify", help="Freivalds verification of a product file")
    ver.add_argument("--a", required=True)
    ver.add_argument("--b", required=True)
    ver.add_argument("--c", required=True)
    ver.add_argument("--rounds", type=int, default=64)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(fn=cmd_verify)

    cor = sub.add_parser("correct", help="correct an erroneous product file")
    cor.add_argument(
        "--algo",
        choices=["single", "det1", "det2", "fewbits", "rand", "randk", "sketch", "auto"],
        required=True,
    )
    cor.add_argument("--a", required=True)
    cor.add_argument("--b", required=True)
    cor.add_argument("--c", required=True)
    cor.add_argument("--k", type=int, default=None)
    cor.add_argument("--seed", type=int, default=0)
    cor.add_argument("--out", required=True)
    cor.set_defaults(fn=cmd_correct)

    ben = sub.add_parser("bench", help="run the acceptance grid and emit stats")
    ben.add_argument("--suite", choices=["smoke", "full"], required=True)
    ben.add_argument("--out", required=True)
    ben.add_argument("--plot-dir", default=None)
    ben.add_argument("--seed", type=int, default=0)
    ben.set_defaults(fn=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
