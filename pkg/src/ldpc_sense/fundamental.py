"""Fundamental cone and fundamental polytope of a parity-check matrix.

The polytope is described by the odd-subset cuts of every check together
with the unit box; the cone by the per-check "no coordinate outweighs the
rest" inequalities. Both vertex sets are enumerated exactly with the
double-description method on integer vectors.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np

from .errors import CapExceeded, RowTooDense
from .lpsolve import TOL_FEAS

__all__ = [
    "check_sets",
    "cone_inequalities",
    "cone_margin",
    "cone_membership",
    "polytope_cuts",
    "cone_rays",
    "polytope_vertices",
    "MAX_CUT_ROW_WEIGHT",
]

MAX_CUT_ROW_WEIGHT = 12


def check_sets(H):
    """The sets I_j of column indices with a nonzero entry in row j."""
    A = np.asarray(H)
    if A.ndim != 2:
        raise ValueError("H must be a 2-d matrix")
    return [np.flatnonzero(row != 0) for row in A]


def cone_inequalities(H):
    """Matrix G with K(H) = {w : G w >= 0}; the first n rows are the identity."""
    sets = check_sets(H)
    n = np.shape(H)[1]
    rows = [np.eye(n, dtype=np.int64)]
    for I in sets:
        for i in I:
            g = np.zeros(n, dtype=np.int64)
            g[I] = 1
            g[i] = -1
            rows.append(g[None, :])
    return np.vstack(rows)


def cone_margin(H, omega):
    """Smallest slack of the cone inequalities at ``omega`` (>= 0 iff inside)."""
    w = np.asarray(omega, dtype=np.float64).reshape(-1)
    if w.shape[0] != np.shape(H)[1]:
        raise ValueError("omega length must equal the number of columns of H")
    G = cone_inequalities(H)
    return float((G @ w).min())


def cone_membership(H, omega, tol=TOL_FEAS):
    """True iff ``omega`` satisfies every fundamental-cone inequality within ``tol``."""
    return cone_margin(H, omega) >= -tol


def polytope_cuts(H, max_row_weight=MAX_CUT_ROW_WEIGHT):
    """Odd-subset cuts ``A_ub x <= b_ub`` of the fundamental polytope.

    For each check j and each odd-size T within I_j the cut reads
    ``sum_T x - sum_{I_j \\ T} x <= |T| - 1``. The box ``0 <= x <= 1`` is not
    included. Raises :class:`RowTooDense` for rows heavier than
    ``max_row_weight`` (each such row has 2**(d-1) cuts).
    """
    sets = check_sets(H)
    n = np.shape(H)[1]
    A_rows, b = [], []
    for j, I in enumerate(sets):
        d = len(I)
        if d > max_row_weight:
            raise RowTooDense(f"row {j} has weight {d} > {max_row_weight}")
        for size in range(1, d + 1, 2):
            for T in combinations(I, size):
                a = np.zeros(n, dtype=np.int64)
                a[I] = -1
                a[list(T)] = 1
                A_rows.append(a)
                b.append(size - 1)
    if not A_rows:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.array(A_rows), np.array(b, dtype=np.int64)


def _normalize(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g > 1:
        v = tuple(x // g for x in v)
    return tuple(v)


def _extreme_rays(G, cap):
    """Extreme rays of the pointed cone ``{y : G y >= 0}`` (integer G).

    The first ``d`` rows of ``G`` must be the identity, so the construction
    starts from the orthant's unit rays and adds the remaining rows one at a
    time. Two rays are combined only if they are adjacent, which is tested
    combinatorially on their zero sets.
    """
    G = [tuple(int(x) for x in row) for row in np.asarray(G)]
    d = len(G[0])
    rays = []
    for i in range(d):
        v = tuple(1 if t == i else 0 for t in range(d))
        zero = 0
        for k in range(d):
            if k != i:
                zero |= 1 << k
        rays.append((v, zero))
    for k in range(d, len(G)):
        a = G[k]
        vals = [sum(x * y for x, y in zip(a, v)) for v, _ in rays]
        pos = [r for r, s in zip(rays, vals) if s > 0]
        neg = [(r, s) for r, s in zip(rays, vals) if s < 0]
        zer = [r for r, s in zip(rays, vals) if s == 0]
        if not neg:
            rays = pos + [(v, z | (1 << k)) for v, z in zer]
            continue
        pos_vals = [s for s in vals if s > 0]
        new = []
        for (p, zp), sp_ in zip(pos, pos_vals):
            for (q, zq), sq in neg:
                common = zp & zq
                if bin(common).count("1") < d - 2:
                    continue
                if any((zr & common) == common for v, zr in rays if v is not p and v is not q):
                    continue
                comb = tuple(sp_ * y - sq * x for x, y in zip(p, q))
                new.append((_normalize(comb), common | (1 << k)))
        rays = pos + [(v, z | (1 << k)) for v, z in zer] + new
        if len(rays) > cap:
            raise CapExceeded(f"more than {cap} extreme rays")
    return [v for v, _ in rays]


def cone_rays(H, cap=10_000):
    """Extreme rays of the fundamental cone as integer vectors (sorted)."""
    G = cone_inequalities(H)
    rays = _extreme_rays(G, cap)
    # drop rays that are zero (cannot occur for a pointed cone) and sort
    return sorted(r for r in rays if any(r))


def polytope_vertices(H, cap=10_000, max_row_weight=MAX_CUT_ROW_WEIGHT):
    """Vertices of the fundamental polytope as tuples of Fractions (sorted).

    The polytope ``{0 <= x <= 1} intersected with the odd-subset cuts`` is
    homogenized to the cone over ``(x, t)`` and its extreme rays are scaled
    back to ``t = 1``.
    """
    A, b = polytope_cuts(H, max_row_weight)
    n = np.shape(H)[1]
    rows = [np.eye(n + 1, dtype=np.int64)]
    # box: t - x_i >= 0
    box = np.hstack([-np.eye(n, dtype=np.int64), np.ones((n, 1), dtype=np.int64)])
    rows.append(box)
    if len(b):
        # cut: (|T| - 1) t - a.x >= 0
        rows.append(np.hstack([-A, b[:, None]]))
    G = np.vstack(rows)
    rays = _extreme_rays(G, cap)
    verts = set()
    for r in rays:
        t = r[-1]
        if t <= 0:
            continue
        verts.add(tuple(Fraction(x, t) for x in r[:-1]))
    return sorted(verts)
