"""Instance fabrication, error injection, and the Monte-Carlo experiment
runner that backs the benchmark CLI and the acceptance suite.

Every algorithm run is post-validated against the ground-truth product;
``success`` means bit-exact equality regardless of what the algorithm's
own verification concluded.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from typing import Any

from . import instrumentation
from .corrections import ErrorReport
from .correct_deterministic import DetConfig, correct_det_singlepass, correct_det_twopass
from .correct_fewbits import correct_fewbits
from .correct_randomized import RandConfig, correct_rand_known, correct_rand_unknown
from .correct_single import correct_single_error
from .errors import KTooLarge
from .instrumentation import CountingRng
from .matrix import Matrix, naive_multiply
from .ring import RingContext
from .sketch import SketchParams, correct_compressed

PATTERNS = ("uniform", "row_burst", "col_burst", "single_row_all", "cancelling")

#: Field order of the JSON-lines stats records.
STATS_FIELDS = (
    "algo",
    "n",
    "k_true",
    "k_param",
    "corrections",
    "ring_mults",
    "random_bits",
    "restarts",
    "wall_ms",
    "success",
)

ALGOS = ("single", "det1", "det2", "fewbits", "rand", "randk", "sketch")


@dataclass
class Instance:
    a: Matrix
    b: Matrix
    c_true: Matrix
    c_err: Matrix
    injected: set[tuple[int, int, int]] = field(default_factory=set)
    seed: int = 0
    pattern: str = "uniform"

    @property
    def n(self) -> int:
        return self.c_true.rows

    @property
    def k(self) -> int:
        return len(self.injected)


def _random_matrix(rows: int, cols: int, ctx: RingContext, rnd: random.Random) -> Matrix:
    if ctx.is_wrap:
        values = [[rnd.getrandbits(64) for _ in range(cols)] for _ in range(rows)]
    else:
        values = [[rnd.randrange(ctx.modulus) for _ in range(cols)] for _ in range(rows)]
    m = Matrix.zeros(rows, cols, ctx)
    for i in range(rows):
        for j in range(cols):
            m.data[i, j] = ctx.normalize(values[i][j])
    return m


def _nonzero_delta(ctx: RingContext, rnd: random.Random) -> int:
    if ctx.is_wrap:
        while True:
            d = rnd.getrandbits(64)
            if d:
                return d
    return 1 + rnd.randrange(ctx.modulus - 1)


def _pick_cells(n: int, k: int, pattern: str, rnd: random.Random) -> list[tuple[int, int]]:
    all_cols = list(range(n))
    if pattern == "uniform":
        flat = rnd.sample(range(n * n), k)
        return [(c // n, c % n) for c in flat]
    if pattern in ("row_burst", "col_burst"):
        lanes = min(n, max(1, math.ceil(math.sqrt(k))))
        while lanes * n < k:
            lanes += 1
        chosen = rnd.sample(range(n), lanes)
        cells: list[tuple[int, int]] = []
        per_lane = math.ceil(k / lanes)
        for lane in chosen:
            take = min(per_lane, k - len(cells))
            for other in rnd.sample(all_cols, take):
                cells.append((lane, other) if pattern == "row_burst" else (other, lane))
            if len(cells) == k:
                break
        return cells
    if pattern == "single_row_all":
        cells = []
        rows_needed = math.ceil(k / n)
        start = rnd.randrange(n)
        for r in range(rows_needed):
            row = (start + r) % n
            take = min(n, k - len(cells))
            for col in rnd.sample(all_cols, take):
                cells.append((row, col))
        return cells
    if pattern == "cancelling":
        return _pick_cells(n, k, "uniform", rnd)  # pairing handled by caller
    raise ValueError(f"unknown pattern {pattern!r}")


def generate_instance(
    n: int, k: int, ctx: RingContext, seed: int, pattern: str = "uniform"
) -> Instance:
    """Fabricate A, B, the true product, and an erroneous copy with exactly
    k perturbed cells.

    The cancelling pattern places paired +d/-d deltas inside shared rows so
    the plain all-ones row test is defeated.
    """
    if k > n * n:
        raise KTooLarge(f"k={k} exceeds n^2={n * n}")
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    rnd = random.Random(("instance", seed, n, k, pattern).__repr__())
    a = _random_matrix(n, n, ctx, rnd)
    b = _random_matrix(n, n, ctx, rnd)
    c_true = naive_multiply(a, b)
    c_err = c_true.copy()
    injected: set[tuple[int, int, int]] = set()

    if pattern == "cancelling" and n >= 2:
        cells: list[tuple[int, int]] = []
        deltas: list[int] = []
        used: set[tuple[int, int]] = set()
        while len(cells) + 1 < k:
            row = rnd.randrange(n)
            j1, j2 = rnd.sample(range(n), 2)
            if (row, j1) in used or (row, j2) in used:
                continue
            d = _nonzero_delta(ctx, rnd)
            used.update([(row, j1), (row, j2)])
            cells.extend([(row, j1), (row, j2)])
            deltas.extend([d, ctx.neg(d)])
        if len(cells) < k:  # odd k leaves one unpaired cell
            while True:
                cell = (rnd.randrange(n), rnd.randrange(n))
                if cell not in used:
                    break
            cells.append(cell)
            deltas.append(_nonzero_delta(ctx, rnd))
    else:
        cells = _pick_cells(n, k, pattern, rnd)
        deltas = [_nonzero_delta(ctx, rnd) for _ in cells]

    for (i, j), d in zip(cells, deltas):
        c_err.set_entry(i, j, ctx.add(c_true.get(i, j), d))
        injected.add((i, j, d))
    return Instance(a=a, b=b, c_true=c_true, c_err=c_err, injected=injected,
                    seed=seed, pattern=pattern)


def generate_rect_instance(
    p: int, q: int, r: int, k: int, ctx: RingContext, seed: int
) -> Instance:
    """Rectangular p x q times q x r instance with k uniform errors."""
    if k > p * r:
        raise KTooLarge(f"k={k} exceeds p*r={p * r}")
    rnd = random.Random(("rect", seed, p, q, r, k).__repr__())
    a = _random_matrix(p, q, ctx, rnd)
    b = _random_matrix(q, r, ctx, rnd)
    c_true = naive_multiply(a, b)
    c_err = c_true.copy()
    injected: set[tuple[int, int, int]] = set()
    for flat in rnd.sample(range(p * r), k):
        i, j = flat // r, flat % r
        d = _nonzero_delta(ctx, rnd)
        c_err.set_entry(i, j, ctx.add(c_true.get(i, j), d))
        injected.add((i, j, d))
    return Instance(a=a, b=b, c_true=c_true, c_err=c_err, injected=injected,
                    seed=seed, pattern="uniform")


def run_algorithm(
    algo: str,
    a: Matrix,
    b: Matrix,
    c_err: Matrix,
    k_param: int | None,
    rng: CountingRng | None,
    **kwargs: Any,
) -> tuple[Matrix, ErrorReport]:
    """Dispatch one corrector by name.  Deterministic algorithms ignore rng."""
    if algo == "single":
        fixed, corr = correct_single_error(a, b, c_err)
        report = ErrorReport(corrections=[corr])
        return fixed, report
    if algo in ("det1", "det2"):
        if k_param is None:
            raise ValueError(f"--k is required for {algo}")
        cfg = DetConfig(k=k_param, **kwargs)
        fn = correct_det_singlepass if algo == "det1" else correct_det_twopass
        return fn(a, b, c_err, cfg)
    if rng is None:
        raise ValueError(f"{algo} needs a random source")
    if algo == "fewbits":
        if k_param is None:
            raise ValueError("--k is required for fewbits")
        fixed, report, _ledger = correct_fewbits(a, b, c_err, k_param, rng, **kwargs)
        return fixed, report
    if algo == "rand":
        return correct_rand_unknown(a, b, c_err, RandConfig(**kwargs), rng)
    if algo == "randk":
        if k_param is None:
            raise ValueError("--k is required for randk")
        return correct_rand_known(a, b, c_err, k_param, rng, **kwargs)
    if algo == "sketch":
        params = kwargs.pop("params", SketchParams())
        return correct_compressed(a, b, c_err, k_param, rng, params=params, **kwargs)
    raise ValueError(f"unknown algorithm {algo!r}")


def derive_seed(seed: int, trial: int) -> int:
    return (seed * 1_000_003 + trial * 7919 + 17) & 0x7FFFFFFF


def run_trial(
    algo: str,
    inst: Instance,
    k_param: int | None,
    trial_seed: int,
    **kwargs: Any,
) -> dict[str, Any]:
    """One algorithm run with fresh counters; returns a RunStats record."""
    rng = None if algo in ("single", "det1", "det2") else CountingRng(trial_seed)
    instrumentation.reset_mults()
    start = time.perf_counter()
    success = False
    report = ErrorReport()
    try:
        fixed, report = run_algorithm(algo, inst.a, inst.b, inst.c_err, k_param, rng, **kwargs)
        success = fixed.equals(inst.c_true)
    except Exception as exc:  # per-trial failure record
        report.notes.append(f"{type(exc).__name__}: {exc}")
    wall_ms = (time.perf_counter() - start) * 1000.0
    return {
        "algo": algo,
        "n": inst.n,
        "k_true": inst.k,
        "k_param": k_param,
        "corrections": len(report.corrections),
        "ring_mults": instrumentation.mults(),
        "random_bits": rng.bits_used if rng is not None else 0,
        "restarts": report.restarts,
        "wall_ms": wall_ms,
        "success": success,
    }


def run_experiment(
    algo: str,
    inst: Instance,
    trials: int,
    seed: int,
    k_param: int | None = None,
    **kwargs: Any,
) -> list[dict[str, Any]]:
    """trials independent runs with per-trial derived seeds."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return [
        run_trial(algo, inst, k_param, derive_seed(seed, t), **kwargs)
        for t in range(trials)
    ]


def aggregate(records: list[dict[str, Any]]) -> dict[str, Any]:
    n = len(records)
    mult_counts = sorted(r["ring_mults"] for r in records)
    return {
        "trials": n,
        "success_rate": sum(r["success"] for r in records) / n,
        "median_mults": mult_counts[n // 2],
        "p90_mults": mult_counts[min(n - 1, (9 * n) // 10)],
        "median_bits": sorted(r["random_bits"] for r in records)[n // 2],
    }


def write_jsonl(records: list[dict[str, Any]], path: str) -> None:
    with open(path, "w") as fh:
        for rec in records:
            ordered = {key: rec[key] for key in STATS_FIELDS}
            fh.write(json.dumps(ordered) + "\n")
