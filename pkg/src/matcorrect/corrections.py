"""Shared record types for corrector outputs."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Correction:
    """One repaired cell: new_value is the recomputed authoritative entry."""

    row: int
    col: int
    old_value: int
    new_value: int


@dataclass
class ErrorReport:
    corrections: list[Correction] = field(default_factory=list)
    restarts: int = 0
    iterations: int = 0
    notes: list[str] = field(default_factory=list)

    def record(self, corr: Correction) -> None:
        self.corrections.append(corr)

    @property
    def cells(self) -> set[tuple[int, int]]:
        return {(c.row, c.col) for c in self.corrections}


@dataclass
class BitBudgetLedger:
    """Exact accounting of PRNG bits spent on random prime selection."""

    draws: list[tuple[int, int]] = field(default_factory=list)  # (prime_index, bits)

    @property
    def bits_consumed(self) -> int:
        return sum(bits for _, bits in self.draws)

    def log(self, prime_index: int, bits: int) -> None:
        self.draws.append((prime_index, bits))
