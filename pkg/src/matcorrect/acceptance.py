"""Acceptance criteria for the whole toolchain.

Ten checks, each returning a pass/fail verdict plus a one-line summary.
The `smoke` suite runs shrunken parameterizations of the same checks; the
`full` suite runs them at the documented scales.  All randomness derives
from a single suite seed, so reruns are bit-reproducible except wall_ms.
"""

from __future__ import annotations

import json
import math
import os
import random
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass
from typing import Any

from . import instrumentation
from .correct_deterministic import DetConfig, correct_det_singlepass, correct_det_twopass
from .harness import (
    PATTERNS,
    generate_instance,
    generate_rect_instance,
    run_algorithm,
    run_trial,
)
from .instrumentation import CountingRng
from .matrix import Matrix
from .ring import RingContext
from .sketch import HashPair, build_sketch, sample_hash_pairs
from .verifier import full_random_vector, mismatch_rows, verify_product

GRID_CTX = RingContext(1_000_003)

DET_ALGOS = ("single", "det1", "det2")
RAND_ALGOS = ("fewbits", "randk", "rand", "sketch")


@dataclass
class CriterionResult:
    name: str
    passed: bool
    details: str


def _trial_seed(*parts: Any) -> int:
    return random.Random(repr(parts)).getrandbits(31)


def k_values(n: int) -> list[int]:
    return sorted({1, 2, math.ceil(math.sqrt(n)), math.ceil(n / 2), n})


# --- criteria 1 and 2: exactness grid ----------------------------------------


def run_grid(full: bool, seed: int) -> tuple[list[dict[str, Any]], float]:
    """One record per (n, k, pattern, instance, algorithm).

    Returns the records plus the wall seconds spent on the deterministic
    algorithms alone (their runtime is itself a criterion).
    """
    ns = (8, 16, 32, 64) if full else (8, 16)
    instances = 50 if full else 4
    records: list[dict[str, Any]] = []
    det_seconds = 0.0
    for n in ns:
        for k in k_values(n):
            for pattern in PATTERNS:
                for idx in range(instances):
                    inst = generate_instance(
                        n, k, GRID_CTX, _trial_seed("grid", seed, n, k, pattern, idx),
                        pattern,
                    )
                    for algo in DET_ALGOS + RAND_ALGOS:
                        if algo == "single" and k != 1:
                            continue
                        k_param = None if algo in ("single", "rand") else k
                        rec = run_trial(
                            algo, inst, k_param,
                            _trial_seed("run", seed, n, k, pattern, idx, algo),
                        )
                        rec["pattern"] = pattern
                        records.append(rec)
                        if algo in DET_ALGOS:
                            det_seconds += rec["wall_ms"] / 1000.0
    return records, det_seconds


def criterion_exactness_det(
    records: list[dict[str, Any]], det_seconds: float
) -> CriterionResult:
    det = [r for r in records if r["algo"] in DET_ALGOS]
    failures = [r for r in det if not r["success"]]
    bits = [r for r in det if r["random_bits"] != 0]
    budget_ok = det_seconds < 300.0
    passed = not failures and not bits and budget_ok
    details = (
        f"{len(det) - len(failures)}/{len(det)} exact, "
        f"{len(bits)} nonzero-bit runs, det wall {det_seconds:.1f}s (budget 300s)"
    )
    return CriterionResult("deterministic exactness grid", passed, details)


def criterion_exactness_rand(records: list[dict[str, Any]]) -> CriterionResult:
    always = [r for r in records if r["algo"] in ("fewbits", "randk", "rand")]
    hard_failures = [r for r in always if not r["success"]]
    sketch = [r for r in records if r["algo"] == "sketch"]
    pre_retry = sum(1 for r in sketch if r["success"] and r["restarts"] == 0)
    pre_rate = pre_retry / len(sketch) if sketch else 1.0
    sketch_failures = [
        r for r in sketch if not r["success"] or r["restarts"] > 3
    ]
    passed = not hard_failures and pre_rate >= 0.99 and not sketch_failures
    details = (
        f"fewbits/randk/rand {len(always) - len(hard_failures)}/{len(always)} exact; "
        f"sketch pre-retry {pre_rate:.4f} (>=0.99), "
        f"{len(sketch) - len(sketch_failures)}/{len(sketch)} within 3 retries"
    )
    return CriterionResult("randomized exactness grid", passed, details)


# --- criterion 3: rectangular single-error cost ------------------------------


def criterion_rect_cost(
    full: bool, seed: int
) -> tuple[CriterionResult, list[dict[str, Any]]]:
    shapes = 200 if full else 30
    max_dim = 128 if full else 32
    rnd = random.Random(repr(("rect-shapes", seed)))
    records = []
    worst = 0.0
    violations = 0
    for idx in range(shapes):
        p = rnd.randrange(2, max_dim + 1)
        q = rnd.randrange(2, max_dim + 1)
        r = rnd.randrange(2, max_dim + 1)
        inst = generate_rect_instance(p, q, r, 1, GRID_CTX, _trial_seed("rect", seed, idx))
        rec = run_trial("single", inst, None, 0)
        records.append(rec)
        bound = 4 * (p * q + q * r + p * r)
        worst = max(worst, rec["ring_mults"] / bound)
        if rec["ring_mults"] > bound or not rec["success"]:
            violations += 1
    passed = violations == 0
    details = f"{shapes} shapes, worst mults/bound {worst:.3f} (<=1), {violations} violations"
    return CriterionResult("single-error rectangular cost", passed, details), records


# --- criterion 4: one-pass vs two-pass k-scaling -----------------------------


def criterion_scaling(
    full: bool, seed: int
) -> tuple[CriterionResult, list[dict[str, Any]]]:
    n = 64
    seeds = 30 if full else 8
    records = []
    ratios = {"det1": [], "det2": []}
    for idx in range(seeds):
        mults = {}
        for k in (4, 16):
            inst = generate_instance(n, k, GRID_CTX, _trial_seed("scal", seed, idx, k))
            for algo, fn in (("det1", correct_det_singlepass), ("det2", correct_det_twopass)):
                instrumentation.reset_mults()
                start = time.perf_counter()
                fixed, report = fn(inst.a, inst.b, inst.c_err,
                                   DetConfig(k=k, early_exit=False))
                wall_ms = (time.perf_counter() - start) * 1000.0
                mults[(algo, k)] = instrumentation.mults()
                records.append({
                    "algo": algo, "n": n, "k_true": k, "k_param": k,
                    "corrections": len(report.corrections),
                    "ring_mults": mults[(algo, k)], "random_bits": 0,
                    "restarts": report.restarts, "wall_ms": wall_ms,
                    "success": fixed.equals(inst.c_true),
                })
        for algo in ("det1", "det2"):
            ratios[algo].append(mults[(algo, 16)] / mults[(algo, 4)])
    med1 = sorted(ratios["det1"])[seeds // 2]
    med2 = sorted(ratios["det2"])[seeds // 2]
    passed = med1 >= 2 * med2
    details = f"median k=16/k=4 ratio: one-pass {med1:.2f} vs two-pass {med2:.2f} (need >=2x)"
    return CriterionResult("two-pass k-scaling advantage", passed, details), records


# --- criterion 5: random-bit budget of the bit-frugal corrector --------------


def bit_budget(k: int, n: int) -> float:
    lk = math.log2(k)
    return 40.0 * (lk * lk + lk * math.log2(math.log2(n)))


def criterion_bit_budget(
    full: bool, seed: int
) -> tuple[CriterionResult, list[dict[str, Any]]]:
    n = 64
    ks = (4, 16, 64) if full else (4, 16)
    seeds = 100 if full else 20
    records = []
    parts = []
    passed = True
    for k in ks:
        bound = bit_budget(k, n)
        within = 0
        for idx in range(seeds):
            inst = generate_instance(n, k, GRID_CTX, _trial_seed("bits", seed, k, idx))
            rec = run_trial("fewbits", inst, k, _trial_seed("bitrun", seed, k, idx))
            records.append(rec)
            if rec["success"] and rec["random_bits"] <= bound:
                within += 1
        need = math.ceil(0.95 * seeds)
        passed = passed and within >= need
        parts.append(f"k={k}: {within}/{seeds} within {bound:.0f} bits (need {need})")
    return CriterionResult("few-random-bits budget", passed, "; ".join(parts)), records


# --- criterion 6: hash collision bound ---------------------------------------


def criterion_collision(full: bool, seed: int) -> CriterionResult:
    n = 64
    samples = 100_000 if full else 20_000
    s_values = (16, 64, 256) if full else (16,)
    rng = CountingRng(_trial_seed("collide", seed))
    parts = []
    passed = True
    for s in s_values:
        hits = 0
        for _ in range(samples):
            pair = sample_hash_pairs(1, s, n, rng)[0]
            gv, hv = pair.g_values(n), pair.h_values(n)
            i1, j1 = rng.randrange(n), rng.randrange(n)
            while True:
                i2, j2 = rng.randrange(n), rng.randrange(n)
                if (i2, j2) != (i1, j1):
                    break
            if gv[i1] + hv[j1] == gv[i2] + hv[j2]:
                hits += 1
        rate = hits / samples
        ok = rate <= 1.5 / s
        passed = passed and ok
        parts.append(f"s={s}: {rate:.5f} (<= {1.5 / s:.5f})")
    return CriterionResult("hash collision bound", passed, "; ".join(parts))


# --- criterion 7: brute-force sketch identity --------------------------------


def _fixed_pairs(s: int, n: int) -> list[HashPair]:
    rng = CountingRng(0xF1CED)
    return sample_hash_pairs(2, s, n, rng)


def criterion_identity(full: bool, seed: int) -> CriterionResult:
    n, s = 3, 4
    ctx = RingContext(5)
    pairs = _fixed_pairs(s, n)
    instances = 2 if full else 1
    checked = 0
    mismatches = 0
    cells = [(i, j) for i in range(n) for j in range(n)]
    for inst_idx in range(instances):
        inst = generate_instance(n, 0, ctx, _trial_seed("ident", seed, inst_idx))
        patterns: list[list[tuple[int, int, int]]] = [[]]
        for (i, j) in cells:
            for d in range(1, 5):
                patterns.append([(i, j, d)])
        for a_idx in range(len(cells)):
            for b_idx in range(a_idx + 1, len(cells)):
                for d1 in range(1, 5):
                    for d2 in range(1, 5):
                        patterns.append([(*cells[a_idx], d1), (*cells[b_idx], d2)])
        for pat in patterns:
            c_err = inst.c_true.copy()
            for i, j, d in pat:
                c_err.set_entry(i, j, ctx.add(c_err.get(i, j), d))
            sk = build_sketch(inst.a, inst.b, c_err, pairs, s)
            for pair, poly in zip(sk.pairs, sk.polys):
                gv, hv = pair.g_values(n), pair.h_values(n)
                expected = [0] * (2 * s + 1)
                for i, j, d in pat:
                    exp = int(gv[i] + hv[j])
                    expected[exp] = (expected[exp] - d) % 5
                checked += 1
                if [int(v) for v in poly] != expected:
                    mismatches += 1
    passed = mismatches == 0
    details = f"{checked} polynomial checks, {mismatches} mismatches (zero tolerance)"
    return CriterionResult("sketch coefficient identity", passed, details)


# --- criterion 8: collision corruption rate ----------------------------------


def criterion_corruption(full: bool, seed: int) -> CriterionResult:
    n, k = 64, 8
    s = 4 * k
    target = 10_000 if full else 2_000
    rng = CountingRng(_trial_seed("corrupt", seed))
    rnd = random.Random(repr(("corrupt-cells", seed)))
    samples = 0
    corrupted = 0
    while samples < target:
        cells = [(c // n, c % n) for c in rnd.sample(range(n * n), k)]
        pair = sample_hash_pairs(1, s, n, rng)[0]
        gv, hv = pair.g_values(n), pair.h_values(n)
        exps = [int(gv[i] + hv[j]) for i, j in cells]
        for idx in range(k):
            if samples == target:
                break
            samples += 1
            if any(exps[other] == exps[idx] for other in range(k) if other != idx):
                corrupted += 1
    rate = corrupted / samples
    passed = rate <= 0.3
    details = f"corrupted reads {rate:.4f} over {samples} samples (<= 0.3)"
    return CriterionResult("sketch corruption rate", passed, details)


# --- criterion 9: verifier soundness and detection ---------------------------


def criterion_verifier(full: bool, seed: int) -> CriterionResult:
    correct_triples = 1_000 if full else 200
    detect_trials = 10_000 if full else 2_000
    n = 8
    false_positives = 0
    for idx in range(correct_triples):
        inst = generate_instance(n, 0, GRID_CTX, _trial_seed("sound", seed, idx))
        if not verify_product(inst.a, inst.b, inst.c_true,
                              rng=CountingRng(_trial_seed("soundrng", seed, idx))):
            false_positives += 1
    instances = [
        generate_instance(n, 1, GRID_CTX, _trial_seed("detect", seed, idx))
        for idx in range(25)
    ]
    rng = CountingRng(_trial_seed("detectrng", seed))
    detected = 0
    for trial in range(detect_trials):
        inst = instances[trial % len(instances)]
        v = full_random_vector(n, rng)
        if len(mismatch_rows(inst.a, inst.b, inst.c_err, v)):
            detected += 1
    rate = detected / detect_trials
    passed = false_positives == 0 and rate >= 0.45
    details = (
        f"{false_positives}/{correct_triples} false positives (need 0); "
        f"single-round detection {rate:.4f} (>= 0.45)"
    )
    return CriterionResult("verifier soundness/detection", passed, details)


# --- criterion 10: determinism audit -----------------------------------------


def _cli(args: list[str], cwd: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "matcorrect.cli", *args],
        cwd=cwd, capture_output=True, text=True,
    )


def _strip_wall(stdout: str) -> str:
    lines = []
    for line in stdout.splitlines():
        if line.startswith("{"):
            rec = json.loads(line)
            rec.pop("wall_ms", None)
            lines.append(json.dumps(rec, sort_keys=True))
        else:
            lines.append(line)
    return "\n".join(lines)


def criterion_determinism(full: bool, seed: int, include_bench: bool = False) -> CriterionResult:
    problems = []
    with tempfile.TemporaryDirectory() as tmp:
        def path(name: str) -> str:
            return os.path.join(tmp, name)

        gen_args = [
            "gen", "--n", "12", "--k", "5", "--seed", str(seed),
            "--pattern", "cancelling",
            "--out-a", path("a"), "--out-b", path("b"),
            "--out-c", path("c"), "--out-truth", path("truth"),
        ]
        snapshots = []
        for _ in range(2):
            res = _cli(gen_args, tmp)
            if res.returncode != 0:
                problems.append(f"gen exit {res.returncode}")
            snapshots.append(tuple(
                open(path(f)).read() for f in ("a", "b", "c", "truth")
            ))
        if snapshots[0] != snapshots[1]:
            problems.append("gen outputs differ between reruns")

        ver_outs = [
            _cli(["verify", "--a", path("a"), "--b", path("b"), "--c", path("c"),
                  "--seed", str(seed)], tmp)
            for _ in range(2)
        ]
        if any(r.returncode != 1 for r in ver_outs):
            problems.append("verify did not flag the erroneous product")
        if ver_outs[0].stdout != ver_outs[1].stdout:
            problems.append("verify output differs between reruns")

        for algo, k in (("det2", "5"), ("sketch", "5"), ("rand", None)):
            outs = []
            for rerun in range(2):
                args = ["correct", "--algo", algo, "--a", path("a"), "--b", path("b"),
                        "--c", path("c"), "--seed", str(seed),
                        "--out", path(f"fix_{algo}_{rerun}")]
                if k is not None:
                    args += ["--k", k]
                res = _cli(args, tmp)
                if res.returncode != 0:
                    problems.append(f"correct {algo} exit {res.returncode}")
                outs.append((
                    open(path(f"fix_{algo}_{rerun}")).read(),
                    _strip_wall(res.stdout),
                ))
            if outs[0] != outs[1]:
                problems.append(f"correct {algo} differs between reruns")
            if outs[0][0] != open(path("truth")).read():
                problems.append(f"correct {algo} output != truth")

        if include_bench:
            stats = []
            for rerun in range(2):
                out = path(f"stats_{rerun}.jsonl")
                res = _cli(["bench", "--suite", "smoke", "--out", out,
                            "--plot-dir", path(f"figs_{rerun}"),
                            "--seed", str(seed)], tmp)
                if res.returncode != 0:
                    problems.append(f"bench exit {res.returncode}")
                with open(out) as fh:
                    stats.append([_strip_wall(line) for line in fh])
            if stats[0] != stats[1]:
                problems.append("bench stats differ between reruns")

    passed = not problems
    audited = "gen/verify/correct" + ("/bench" if include_bench else "")
    details = f"{audited} reruns byte-identical" if passed else "; ".join(problems)
    return CriterionResult("determinism audit", passed, details)


# --- suite driver ------------------------------------------------------------


def run_suite(
    suite: str, seed: int = 0, include_bench_in_audit: bool | None = None
) -> tuple[list[CriterionResult], list[dict[str, Any]]]:
    """All ten criteria; returns verdicts plus every stats record produced."""
    if suite not in ("smoke", "full"):
        raise ValueError(f"unknown suite {suite!r}")
    full = suite == "full"
    if include_bench_in_audit is None:
        include_bench_in_audit = full
    records: list[dict[str, Any]] = []

    grid_records, det_seconds = run_grid(full, seed)
    records.extend(grid_records)
    results = [
        criterion_exactness_det(grid_records, det_seconds),
        criterion_exactness_rand(grid_records),
    ]
    res3, recs3 = criterion_rect_cost(full, seed)
    records.extend(recs3)
    results.append(res3)
    res4, recs4 = criterion_scaling(full, seed)
    records.extend(recs4)
    results.append(res4)
    res5, recs5 = criterion_bit_budget(full, seed)
    records.extend(recs5)
    results.append(res5)
    results.append(criterion_collision(full, seed))
    results.append(criterion_identity(full, seed))
    results.append(criterion_corruption(full, seed))
    results.append(criterion_verifier(full, seed))
    results.append(criterion_determinism(full, seed, include_bench=include_bench_in_audit))
    return results, records
