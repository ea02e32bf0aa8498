"""Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["solve"]


def solve(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve the square system ``A x = b`` exactly.

    Returns None when ``A`` is singular.
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve expects a square system")
    # augmented copy
    M = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
        prow = M[col]
        inv = 1 / prow[col]
        for c in range(col, n + 1):
            prow[c] *= inv
        for r in range(n):
            if r != col and M[r][col] != 0:
                row = M[r]
                f = row[col]
                for c in range(col, n + 1):
                    row[c] -= f * prow[c]
    return tuple(M[r][n] for r in range(n))
