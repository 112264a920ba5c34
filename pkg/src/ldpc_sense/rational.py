"""Gaussian elimination over the rationals (Fraction entries)."""

from fractions import Fraction
import numbers

import numpy as np

__all__ = ["is_exact", "to_fractions", "rref_exact", "solve_exact", "nullspace_exact"]


def is_exact(a):
    """True if every entry is an integer or a Fraction (no floats)."""
    arr = np.asarray(a, dtype=object).reshape(-1)
    return all(isinstance(x, (numbers.Integral, Fraction)) for x in arr)


def to_fractions(a):
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Fraction(x) if isinstance(x, (numbers.Integral, Fraction)) else Fraction(float(x))
    return out


def rref_exact(M):
    """Reduced row echelon form; returns (rows as lists, pivot columns)."""
    rows = [list(r) for r in to_fractions(M)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r] if rows else [], pivots


def solve_exact(A, b):
    """One solution of ``A x = b`` (free variables set to 0), or None."""
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    aug = np.empty((m, n + 1), dtype=object)
    aug[:, :n] = A
    aug[:, n] = np.asarray(b, dtype=object).reshape(-1)
    rows, pivots = rref_exact(aug)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(rows, pivots):
        x[c] = row[n]
    return np.array(x, dtype=object)


def nullspace_exact(A):
    """Basis of the real nullspace, one Fraction vector per row."""
    A = np.asarray(A, dtype=object)
    n = A.shape[1]
    rows, pivots = rref_exact(A)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(rows, pivots):
            v[c] = -row[f]
        basis.append(v)
    return np.array(basis, dtype=object).reshape(len(basis), n)
