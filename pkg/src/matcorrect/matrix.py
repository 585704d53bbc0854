"""Dense row-major matrices over a ring, the naive multiplication oracle,
and the small recomputation kernels the correctors rely on.

Matrices are immutable by convention except for ``set_entry``, which only
correctors use on their private working copy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, IndexOutOfRange
from .instrumentation import count_mults
from .ring import RingContext


@dataclass
class Matrix:
    ctx: RingContext
    data: np.ndarray  # 2-D, canonical entries, dtype per ctx

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise DimMismatch("matrix data must be 2-D")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @classmethod
    def from_rows(cls, rows, ctx: RingContext) -> "Matrix":
        arr = ctx.array(np.asarray(rows, dtype=object).reshape(len(rows), -1)
                        if len(rows) else np.zeros((0, 0)))
        return cls(ctx, arr)

    @classmethod
    def zeros(cls, rows: int, cols: int, ctx: RingContext) -> "Matrix":
        dtype = ctx.dtype
        if dtype == object:
            data = np.zeros((rows, cols), dtype=object)
        else:
            data = np.zeros((rows, cols), dtype=dtype)
        return cls(ctx, data)

    @classmethod
    def identity(cls, n: int, ctx: RingContext) -> "Matrix":
        m = cls.zeros(n, n, ctx)
        for i in range(n):
            m.data[i, i] = ctx.normalize(1)
        return m

    def copy(self) -> "Matrix":
        return Matrix(self.ctx, self.data.copy())

    def get(self, i: int, j: int) -> int:
        return int(self.data[i, j])

    def set_entry(self, i: int, j: int, value: int) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexOutOfRange(f"({i}, {j}) outside {self.rows}x{self.cols}")
        self.data[i, j] = self.ctx.normalize(value)

    def equals(self, other: "Matrix") -> bool:
        return (self.ctx == other.ctx
                and self.data.shape == other.data.shape
                and bool(np.array_equal(self.data, other.data)))


def _as_ring_vector(v, ctx: RingContext) -> np.ndarray:
    arr = np.asarray(v)
    if ctx.dtype == object:
        return arr.astype(object)
    return arr.astype(ctx.dtype)


def naive_multiply(a: Matrix, b: Matrix) -> Matrix:
    """Exact O(p*q*r) product; the ground-truth oracle for every test."""
    if a.cols != b.rows or a.ctx != b.ctx:
        raise DimMismatch(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    count_mults(a.rows * a.cols * b.cols)
    if a.rows == 0 or b.cols == 0 or a.cols == 0:
        return Matrix.zeros(a.rows, b.cols, a.ctx)
    prod = a.data @ b.data
    return Matrix(a.ctx, a.ctx.normalize(prod))


def mat_vec(m: Matrix, v) -> np.ndarray:
    """m @ v over the ring; charges rows*cols multiplications."""
    v = _as_ring_vector(v, m.ctx)
    if v.shape != (m.cols,):
        raise DimMismatch(f"vector of length {v.shape} against {m.cols} columns")
    count_mults(m.rows * m.cols)
    if m.cols == 0:
        return _as_ring_vector(np.zeros(m.rows), m.ctx)
    return m.ctx.normalize(m.data @ v)


def vec_mat(v, m: Matrix) -> np.ndarray:
    v = _as_ring_vector(v, m.ctx)
    if v.shape != (m.rows,):
        raise DimMismatch(f"vector of length {v.shape} against {m.rows} rows")
    count_mults(m.rows * m.cols)
    if m.rows == 0:
        return _as_ring_vector(np.zeros(m.cols), m.ctx)
    return m.ctx.normalize(v @ m.data)


def mat_mat(m: Matrix, v: np.ndarray) -> np.ndarray:
    """m.data @ v for a 2-D stack of test vectors; charges rows*cols per column."""
    count_mults(m.rows * m.cols * v.shape[1])
    if m.cols == 0:
        return np.zeros((m.rows, v.shape[1]), dtype=m.data.dtype)
    return m.ctx.normalize(m.data @ v)


def transpose(m: Matrix) -> Matrix:
    return Matrix(m.ctx, m.data.T.copy())


def extract_rows(m: Matrix, idx) -> Matrix:
    idx = np.asarray(idx, dtype=np.int64)
    if len(idx) and (idx.min() < 0 or idx.max() >= m.rows):
        raise IndexOutOfRange("row index outside matrix")
    return Matrix(m.ctx, m.data[idx, :].copy())


def extract_cols(m: Matrix, idx) -> Matrix:
    idx = np.asarray(idx, dtype=np.int64)
    if len(idx) and (idx.min() < 0 or idx.max() >= m.cols):
        raise IndexOutOfRange("column index outside matrix")
    return Matrix(m.ctx, m.data[:, idx].copy())


def recompute_row(a: Matrix, b: Matrix, i: int) -> np.ndarray:
    """Row i of the true product, recomputed from scratch."""
    if not 0 <= i < a.rows:
        raise IndexOutOfRange(f"row {i}")
    count_mults(a.cols * b.cols)
    if a.cols == 0:
        return _as_ring_vector(np.zeros(b.cols), a.ctx)
    return a.ctx.normalize(a.data[i, :] @ b.data)


def recompute_entry(a: Matrix, b: Matrix, i: int, j: int) -> int:
    """The authoritative corrected value of cell (i, j)."""
    if not (0 <= i < a.rows and 0 <= j < b.cols):
        raise IndexOutOfRange(f"({i}, {j})")
    count_mults(a.cols)
    if a.cols == 0:
        return a.ctx.normalize(0)
    return a.ctx.normalize(int(np.dot(a.data[i, :], b.data[:, j])))
