"""Fraction-free Gaussian elimination over Python integers.

Rows are kept as sparse ``{column: value}`` dicts; the evaluation matrices
built in this package are mostly zeros with small entries. The elimination is
Bareiss' one-step scheme with column skipping, so every intermediate entry is
a minor of the input and each division is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass
class Echelon:
    rank: int
    pivots: list[tuple[int, int]]  # (row, col) in the permuted matrix
    sign: int
    last_pivot: int


def _to_sparse(matrix: Sequence[Sequence[int]]) -> list[dict[int, int]]:
    return [{j: v for j, v in enumerate(row) if v} for row in matrix]


def _bareiss(rows: list[dict[int, int]], ncols: int) -> Echelon:
    nrows = len(rows)
    prev = 1
    sign = 1
    r = 0
    pivots = []
    last = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i].get(c)), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        prow = rows[r]
        piv = prow[c]
        for i in range(r + 1, nrows):
            row = rows[i]
            a = row.pop(c, 0)
            if a == 0:
                if piv == prev:
                    continue
                if piv == -prev:
                    rows[i] = {j: -v for j, v in row.items()}
                else:
                    rows[i] = {j: v * piv // prev for j, v in row.items()}
                continue
            new = {}
            for j, v in row.items():
                new[j] = piv * v
            for j, v in prow.items():
                if j == c:
                    continue
                new[j] = new.get(j, 0) - a * v
            if prev == 1:
                rows[i] = {j: v for j, v in new.items() if v}
            else:
                rows[i] = {j: v // prev for j, v in new.items() if v}
        pivots.append((r, c))
        prev = piv
        last = piv
        r += 1
    return Echelon(rank=r, pivots=pivots, sign=sign, last_pivot=last)


def rank(matrix: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix."""
    if not matrix:
        return 0
    return _bareiss(_to_sparse(matrix), len(matrix[0])).rank


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix."""
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    ech = _bareiss(_to_sparse(matrix), n)
    if ech.rank < n:
        return 0
    # Bareiss: the final pivot is the determinant of the row-permuted matrix.
    return ech.sign * ech.last_pivot


def sparse_rank(rows: list[dict[int, int]], ncols: int) -> int:
    """Rank of a matrix given directly as sparse rows (rows are consumed)."""
    return _bareiss(rows, ncols).rank
