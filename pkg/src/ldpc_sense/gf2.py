"""Exact linear algebra over GF(2).

Matrices are numpy ``uint8`` arrays holding 0/1 entries. Internally each row is
packed into a Python integer (bit ``c`` is column ``c``), so elimination is a
sequence of XORs on machine words regardless of the matrix width.
"""

import numpy as np

from .errors import CapExceeded, DimensionMismatch

__all__ = [
    "as_binary_matrix",
    "as_binary_vector",
    "rank_gf2",
    "nullspace_basis_gf2",
    "enumerate_codewords",
    "syndrome_gf2",
    "pack_rows",
    "unpack_rows",
]


def as_binary_matrix(M):
    """Validate ``M`` as a nonempty 2-d 0/1 array and return it as uint8."""
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise ValueError(f"expected a nonempty 2-d matrix, got shape {A.shape}")
    if not np.all((A == 0) | (A == 1)):
        raise ValueError("matrix entries must be 0 or 1")
    return A.astype(np.uint8)


def as_binary_vector(v, n=None):
    a = np.asarray(v).reshape(-1)
    if not np.all((a == 0) | (a == 1)):
        raise ValueError("vector entries must be 0 or 1")
    if n is not None and a.shape[0] != n:
        raise DimensionMismatch(f"expected length {n}, got {a.shape[0]}")
    return a.astype(np.uint8)


def pack_rows(A):
    """Pack each row of a 0/1 matrix into an int (column c -> bit c)."""
    A = np.asarray(A, dtype=np.uint8)
    weights = [1 << c for c in range(A.shape[1])]
    return [sum(w for w, bit in zip(weights, row) if bit) for row in A.tolist()]


def unpack_rows(rows, n):
    if n <= 63:
        words = np.array(rows, dtype=np.uint64).reshape(-1, 1)
        shifts = np.arange(n, dtype=np.uint64)
        return ((words >> shifts) & np.uint64(1)).astype(np.uint8)
    out = np.zeros((len(rows), n), dtype=np.uint8)
    for r, word in enumerate(rows):
        for c in range(n):
            if (word >> c) & 1:
                out[r, c] = 1
    return out


def _rref(rows, n):
    """Reduced row echelon form of packed rows; returns (rows, pivot_columns)."""
    rows = list(rows)
    pivots = []
    r = 0
    for c in range(n):
        bit = 1 << c
        p = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_gf2(M):
    A = as_binary_matrix(M)
    _, pivots = _rref(pack_rows(A), A.shape[1])
    return len(pivots)


def nullspace_basis_gf2(M):
    """Basis of the GF(2) nullspace, one vector per row (shape ``(n - rank, n)``)."""
    A = as_binary_matrix(M)
    n = A.shape[1]
    rows, pivots = _rref(pack_rows(A), n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        word = 1 << free
        for row, pc in zip(rows, pivots):
            if (row >> free) & 1:
                word |= 1 << pc
        basis.append(word)
    return unpack_rows(basis, n)


def enumerate_codewords(M, cap=1 << 16):
    """All vectors ``x`` with ``M x = 0 (mod 2)``, in Gray-code order.

    Each step flips a single basis vector into the running sum, so every
    codeword costs one XOR. Raises :class:`CapExceeded` when ``2**dim > cap``.
    """
    A = as_binary_matrix(M)
    n = A.shape[1]
    basis = pack_rows(nullspace_basis_gf2(A))
    count = 1 << len(basis)
    if count > cap:
        raise CapExceeded(f"code has {count} codewords, cap is {cap}")
    words = [0] * count
    cur = 0
    for t in range(1, count):
        # index of the bit that changes between gray(t-1) and gray(t)
        flip = (t & -t).bit_length() - 1
        cur ^= basis[flip]
        words[t] = cur
    return unpack_rows(words, n)


def syndrome_gf2(M, v):
    A = as_binary_matrix(M)
    x = as_binary_vector(v, A.shape[1])
    return ((A.astype(np.int64) @ x) % 2).astype(np.uint8)
