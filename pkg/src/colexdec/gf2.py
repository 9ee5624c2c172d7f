"""Dense linear algebra over GF(2).

Matrices and vectors are numpy ``uint8`` arrays with entries in {0, 1};
addition is XOR.  Elimination pivots lowest-index-first (leftmost column,
topmost row), so ranks, solutions, and nullspace bases are reproducible
across runs and platforms.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_gf2",
    "row_echelon",
    "rank",
    "solve",
    "nullspace",
    "in_rowspace",
    "Gf2Solver",
]


def as_gf2(a) -> np.ndarray:
    """Coerce input to a uint8 array with entries reduced mod 2."""
    arr = np.asarray(a)
    if arr.dtype == np.uint8:
        return arr & 1
    return (arr % 2).astype(np.uint8)


def _eliminate(a: np.ndarray, n_pivot_cols: int) -> list[int]:
    """In-place reduced row echelon form on the first ``n_pivot_cols`` columns.

    Returns the pivot column indices in order.  Rows beyond the pivot count
    end up zero (in the pivot columns).
    """
    n_rows = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(n_pivot_cols):
        if r == n_rows:
            break
        below = np.nonzero(a[r:, c])[0]
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return pivots


def row_echelon(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.  Returns ``(R, pivot_columns)``."""
    r = as_gf2(m).copy()
    if r.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    pivots = _eliminate(r, r.shape[1])
    return r, pivots


def rank(m) -> int:
    """GF(2) rank."""
    _, pivots = row_echelon(m)
    return len(pivots)


class Gf2Solver:
    """Precomputed elimination of a fixed matrix for repeated solves.

    Factors M once into R = T @ M with R in reduced row echelon form and T
    invertible, so each ``solve``/``consistent`` call is a single
    matrix-vector product plus a scatter.
    """

    def __init__(self, m) -> None:
        m = as_gf2(m)
        if m.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        self.m = m
        n_rows, n_cols = m.shape
        aug = np.concatenate([m.copy(), np.eye(n_rows, dtype=np.uint8)], axis=1)
        self._pivots = _eliminate(aug, n_cols)
        self._r = aug[:, :n_cols]
        # int64 so matrix-vector products cannot overflow before the mod-2 step
        self._t = aug[:, n_cols:].astype(np.int64)
        self._n_pivots = len(self._pivots)

    @property
    def rank(self) -> int:
        return self._n_pivots

    def _transform(self, b) -> np.ndarray:
        b = as_gf2(b).ravel()
        if b.shape[0] != self.m.shape[0]:
            raise ValueError(
                f"rhs has length {b.shape[0]}, expected {self.m.shape[0]}"
            )
        return (self._t @ b) & 1

    def consistent(self, b) -> bool:
        """True when M x = b has a solution."""
        tb = self._transform(b)
        return not tb[self._n_pivots :].any()

    def solve(self, b) -> np.ndarray | None:
        """Any x with M x = b, or None when the system is inconsistent."""
        tb = self._transform(b)
        if tb[self._n_pivots :].any():
            return None
        x = np.zeros(self.m.shape[1], dtype=np.uint8)
        if self._n_pivots:
            x[self._pivots] = tb[: self._n_pivots].astype(np.uint8)
        return x

    def nullspace(self) -> np.ndarray:
        """Basis of the right nullspace {x : M x = 0}, one vector per row."""
        n_cols = self.m.shape[1]
        pivot_set = set(self._pivots)
        free = [c for c in range(n_cols) if c not in pivot_set]
        basis = np.zeros((len(free), n_cols), dtype=np.uint8)
        for i, c in enumerate(free):
            basis[i, c] = 1
            if self._n_pivots:
                basis[i, self._pivots] = self._r[: self._n_pivots, c]
        return basis


def solve(m, b) -> np.ndarray | None:
    """Any solution of M x = b over GF(2), or None if none exists."""
    return Gf2Solver(m).solve(b)


def nullspace(m) -> np.ndarray:
    """Basis of the right nullspace of M, one vector per row."""
    return Gf2Solver(m).nullspace()


def in_rowspace(m, v) -> bool:
    """True when v is a GF(2) combination of the rows of M."""
    m = as_gf2(m)
    v = as_gf2(v).ravel()
    if v.shape[0] != m.shape[1]:
        raise ValueError(f"vector has length {v.shape[0]}, expected {m.shape[1]}")
    return Gf2Solver(m.T).solve(v) is not None
