"""GF(2) linear algebra on numpy uint8 matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


def to_gf2(matrix) -> np.ndarray:
    return np.array(matrix, dtype=np.uint8) % 2


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.uint8)


@dataclass(frozen=True)
class RowReduceResult:
    matrix: np.ndarray
    rank: int
    pivots: Tuple[int, ...]


def gf2_row_reduce(matrix) -> RowReduceResult:
    """Reduced row echelon form; pivots are taken left to right, topmost row first."""
    mat = to_gf2(matrix).copy()
    if mat.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = mat.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        candidates = np.nonzero(mat[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        mask = mat[:, col].astype(bool)
        mask[row] = False
        mat[mask] ^= mat[row]
        pivots.append(col)
        row += 1
    return RowReduceResult(matrix=mat, rank=len(pivots), pivots=tuple(pivots))


def gf2_rank(matrix) -> int:
    mat = to_gf2(matrix)
    if mat.size == 0:
        return 0
    return gf2_row_reduce(mat).rank


def gf2_nullspace_basis(matrix) -> np.ndarray:
    """Basis of {v : M v = 0}, one vector per row, ordered by free column."""
    mat = to_gf2(matrix)
    n = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    reduced = gf2_row_reduce(mat)
    pivots = set(reduced.pivots)
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        vec = np.zeros(n, dtype=np.uint8)
        vec[free] = 1
        for row, col in enumerate(reduced.pivots):
            if reduced.matrix[row, free]:
                vec[col] = 1
        basis.append(vec)
    if not basis:
        return np.zeros((0, n), dtype=np.uint8)
    return np.vstack(basis)


def gf2_column_space_basis(matrix) -> np.ndarray:
    """Independent columns of M (pivot columns), one per row of the result."""
    mat = to_gf2(matrix)
    if mat.size == 0:
        return np.zeros((0, mat.shape[0]), dtype=np.uint8)
    reduced = gf2_row_reduce(mat)
    if not reduced.pivots:
        return np.zeros((0, mat.shape[0]), dtype=np.uint8)
    return mat[:, list(reduced.pivots)].T.copy()


def gf2_solve(matrix, vector) -> Optional[np.ndarray]:
    """Some x with M x = v, or None when the system is inconsistent."""
    mat = to_gf2(matrix)
    m, n = mat.shape
    vec = to_gf2(vector).reshape(-1, 1)
    if vec.shape[0] != m:
        raise ValueError("vector length does not match the number of rows")
    if m == 0:
        return np.zeros(n, dtype=np.uint8)
    reduced = gf2_row_reduce(np.concatenate([mat, vec], axis=1))
    if reduced.pivots and reduced.pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for row, col in enumerate(reduced.pivots):
        x[col] = reduced.matrix[row, n]
    return x


class GF2Solver:
    """Factor M once (T M = RREF) and answer many solves M x = v."""

    def __init__(self, matrix):
        mat = to_gf2(matrix)
        self.shape = mat.shape
        m, n = mat.shape
        augmented = np.concatenate([mat, np.eye(m, dtype=np.uint8)], axis=1)
        reduced = gf2_row_reduce(augmented)
        pivots = tuple(p for p in reduced.pivots if p < n)
        self.rank = len(pivots)
        self.pivots = pivots
        self._transform = reduced.matrix[:, n:]
        self._reduced = reduced.matrix[:, :n]

    def solve(self, vector) -> Optional[np.ndarray]:
        m, n = self.shape
        vec = to_gf2(vector).reshape(-1)
        if m == 0:
            return np.zeros(n, dtype=np.uint8)
        w = gf2_matmul(self._transform, vec.reshape(-1, 1)).reshape(-1)
        if w[self.rank:].any():
            return None
        x = np.zeros(n, dtype=np.uint8)
        for row, col in enumerate(self.pivots):
            x[col] = w[row]
        return x

    @property
    def nullity(self) -> int:
        return self.shape[1] - self.rank


def gf2_matmul(a, b) -> np.ndarray:
    return (to_gf2(a).astype(np.int64) @ to_gf2(b).astype(np.int64) % 2).astype(np.uint8)
