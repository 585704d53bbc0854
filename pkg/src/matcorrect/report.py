"""Figure rendering for benchmark output.

Renders a small set of matplotlib figures next to the JSON-lines stats so
a benchmark run leaves both machine-readable and eyeball-readable output.
"""

from __future__ import annotations

import os
from collections import defaultdict
from statistics import median
from typing import Any

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _by(records: list[dict[str, Any]], *keys: str) -> dict[tuple, list[dict[str, Any]]]:
    grouped: dict[tuple, list[dict[str, Any]]] = defaultdict(list)
    for rec in records:
        grouped[tuple(rec[k] for k in keys)].append(rec)
    return grouped


def render_figures(records: list[dict[str, Any]], out_dir: str) -> list[str]:
    """Write summary figures; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    # Median ring multiplications against k, per algorithm, at the largest n.
    if records:
        n_max = max(r["n"] for r in records)
        subset = [r for r in records if r["n"] == n_max and r["success"]]
        fig, ax = plt.subplots(figsize=(6, 4))
        for (algo,), recs in sorted(_by(subset, "algo").items()):
            ks = sorted({r["k_true"] for r in recs})
            meds = [
                median(r["ring_mults"] for r in recs if r["k_true"] == k) for k in ks
            ]
            if len(ks) > 1:
                ax.plot(ks, meds, marker="o", label=algo)
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel("injected errors k")
        ax.set_ylabel("median ring multiplications")
        ax.set_title(f"correction cost vs error count (n={n_max})")
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, "cost_vs_k.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    # Success rate per algorithm.
    if records:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        algos, rates = [], []
        for (algo,), recs in sorted(_by(records, "algo").items()):
            algos.append(algo)
            rates.append(sum(r["success"] for r in recs) / len(recs))
        ax.bar(algos, rates, color="tab:blue")
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("success rate")
        ax.set_title("post-validated success per algorithm")
        fig.tight_layout()
        path = os.path.join(out_dir, "success_rates.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    # Random-bit consumption for the bit-frugal corrector.
    fewbits = [r for r in records if r["algo"] == "fewbits"]
    if fewbits:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        grouped = _by(fewbits, "k_true")
        ks = sorted(k for (k,) in grouped)
        data = [[r["random_bits"] for r in grouped[(k,)]] for k in ks]
        ax.boxplot(data, tick_labels=[str(k) for k in ks])
        ax.set_xlabel("injected errors k")
        ax.set_ylabel("ledgered random bits")
        ax.set_title("random-bit budget of the few-bits corrector")
        fig.tight_layout()
        path = os.path.join(out_dir, "fewbits_bits.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    return written
