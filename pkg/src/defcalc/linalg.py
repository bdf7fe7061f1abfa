"""Exact linear algebra over QQ: rref, rank, kernel, solve.

Matrices are lists of rows (lists of Fractions).  Sizes here are small, so
plain Gaussian elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

QQ = Fraction


def rref(mat: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(map(QQ, r)) for r in mat]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(mat) -> int:
    return len(rref(mat)[1])


def kernel_basis(mat):
    """Basis of the right kernel {v : mat @ v = 0}."""
    if not mat:
        return []
    ncols = len(mat[0])
    rows, pivots = rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [QQ(0)] * ncols
        v[fc] = QQ(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve(mat, rhs):
    """One solution of mat @ x = rhs, or None."""
    if not mat or not mat[0]:
        return None if any(b != 0 for b in rhs) else []
    ncols = len(mat[0])
    aug = [list(map(QQ, row)) + [QQ(b)] for row, b in zip(mat, rhs)]
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [QQ(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return x


def in_span(vectors, target) -> bool:
    if all(t == 0 for t in target):
        return True
    if not vectors:
        return False
    cols = [list(v) for v in vectors]
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(target))]
    return solve(mat, target) is not None
