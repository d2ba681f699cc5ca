"""Exact Gaussian elimination over the rationals.

Rows are held sparsely as ``{column: value}`` dicts.  Pivots are chosen
as the first row (in current order) with a nonzero entry in the lowest
unreduced column, so results are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .tensor import scalar

__all__ = [
    "rref",
    "rank",
    "rank_sparse",
    "solve",
    "solve_sparse",
    "nullspace",
    "nullspace_sparse",
    "inverse",
    "sparse_rows",
]

SparseRow = dict


def sparse_rows(matrix) -> list[SparseRow]:
    """Dense 2-D input (list of lists or array) to sparse rows."""
    rows = []
    for row in matrix:
        rows.append({j: scalar(v) for j, v in enumerate(row) if v != 0})
    return rows


def rref(rows: Iterable[Mapping[int, object]], ncols: int) -> tuple[list[SparseRow], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [dict(r) for r in rows if r]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i].get(c):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / Fraction(rows[r][c])
        prow = {k: scalar(v * inv) for k, v in rows[r].items()}
        rows[r] = prow
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i].get(c)
            if not f:
                continue
            row = rows[i]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = scalar(nv)
                else:
                    row.pop(k, None)
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _as_sparse(matrix) -> tuple[list[SparseRow], int]:
    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2:
            raise ValueError("expected a 2-D matrix")
        return sparse_rows(matrix), matrix.shape[1]
    matrix = list(matrix)
    if matrix and isinstance(matrix[0], Mapping):
        raise TypeError("pass sparse rows with an explicit column count to rref()")
    ncols = len(matrix[0]) if matrix else 0
    return sparse_rows(matrix), ncols


def rank(matrix) -> int:
    rows, ncols = _as_sparse(matrix)
    return len(rref(rows, ncols)[1])


def rank_sparse(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def solve_sparse(rows: Sequence[Mapping[int, object]], ncols: int, rhs: Sequence) -> Optional[list]:
    """Solve A x = b for sparse rows of A; free variables are set to zero."""
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b != 0:
            r[ncols] = scalar(b)
        aug.append(r)
    reduced, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for row, c in zip(reduced, pivots):
        x[c] = row.get(ncols, 0)
    return x


def solve(matrix, rhs) -> Optional[list]:
    rows, ncols = _as_sparse(matrix)
    if len(rows) != len(rhs):
        raise ValueError("right-hand side length does not match row count")
    return solve_sparse(rows, ncols, list(rhs))


def nullspace_sparse(rows, ncols: int) -> list[list]:
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(reduced, pivots):
            if f in row:
                v[c] = scalar(-row[f])
        basis.append(v)
    return basis


def nullspace(matrix) -> list[list]:
    rows, ncols = _as_sparse(matrix)
    return nullspace_sparse(rows, ncols)


def inverse(matrix) -> np.ndarray:
    rows, n = _as_sparse(matrix)
    if len(rows) != n:
        raise ValueError("inverse of a non-square matrix")
    aug = []
    for i, row in enumerate(rows):
        r = dict(row)
        r[n + i] = 1
        aug.append(r)
    reduced, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    out = np.zeros((n, n), dtype=object)
    for i, row in enumerate(reduced[:n]):
        for k, v in row.items():
            if k >= n:
                out[i, k - n] = v
    return out
