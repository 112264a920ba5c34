"""From nullspace vectors of a measurement matrix to pseudo-codewords.

Every map here goes one way only: a nullspace vector yields a point of the
fundamental cone, never the reverse.
"""

from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import NotInNullspace
from .fundamental import cone_inequalities
from .lpsolve import TOL_FEAS
from .nsp import check_nsp_k
from .pseudoweight import PseudoCodeword, min_pseudoweight_enumerated
from .rational import is_exact, to_fractions

__all__ = [
    "bridge_map",
    "bridge_map_complex",
    "matrix_cover",
    "lift",
    "project",
    "lifted_bridge",
    "multi_vector_bridge",
    "lemma5_gate",
    "BridgeCheck",
]

# relative tolerance for complex / irrational inputs
TOL_COMPLEX = 1e-9


def _residual_ok(H, nu, tol):
    H = np.asarray(H)
    nu = np.asarray(nu)
    if is_exact(H) and is_exact(nu):
        r = to_fractions(H) @ to_fractions(nu)
        return all(x == 0 for x in r)
    Hc = H.astype(np.complex128)
    v = nu.astype(np.complex128)
    scale = 1.0 + np.abs(Hc).sum(axis=1).max(initial=0.0) * np.abs(v).max(initial=0.0)
    return float(np.abs(Hc @ v).max(initial=0.0)) <= tol * scale


def _certify(H01, omega):
    w = np.asarray(omega)
    if is_exact(w):
        margin = min((to_fractions(cone_inequalities(H01)) @ to_fractions(w)).tolist(), default=Fraction(0))
        if margin < 0:
            raise ValueError("vector is not in the fundamental cone")
        return PseudoCodeword(w, np.asarray(H01), float(margin))
    wf = w.astype(np.float64)
    tol = TOL_FEAS * (1.0 + np.abs(wf).max(initial=0.0))
    return PseudoCodeword.certify(H01, wf, tol=tol)


def _magnitude_pattern(H, allowed):
    """|H| rounded to integers; raises if some magnitude is not allowed."""
    mag = np.abs(np.asarray(H).astype(np.complex128))
    rounded = np.rint(mag)
    if np.abs(mag - rounded).max(initial=0.0) > TOL_COMPLEX * (1 + mag.max(initial=0.0)):
        raise ValueError("entry magnitudes must be integers")
    if allowed is not None and not np.isin(rounded, allowed).all():
        raise ValueError(f"entry magnitudes must lie in {sorted(allowed)}")
    return rounded.astype(np.int64)


def bridge_map(H, nu, tol=TOL_FEAS):
    """Map a real nullspace vector of a zero-one matrix to |nu| in K(H)."""
    A = np.asarray(H)
    if A.ndim != 2 or not np.isin(A, (0, 1)).all():
        raise ValueError("H must be a zero-one matrix")
    v = np.asarray(nu)
    if v.shape != (A.shape[1],):
        raise ValueError("nu must have one entry per column of H")
    if np.iscomplexobj(v):
        raise ValueError("use bridge_map_complex for complex vectors")
    if not _residual_ok(A, v, tol):
        raise NotInNullspace("H @ nu is not zero")
    return _certify(A.astype(np.int64), np.abs(v))


def bridge_map_complex(H, nu, norm="abs"):
    """Complex version: entries of H have magnitude 0 or 1, output in K(|H|)."""
    if norm != "abs":
        raise NotImplementedError("only the absolute-value norm is available")
    A = np.asarray(H)
    pattern = _magnitude_pattern(A, (0, 1))
    v = np.asarray(nu)
    if v.shape != (A.shape[1],):
        raise ValueError("nu must have one entry per column of H")
    if not _residual_ok(A, v, TOL_COMPLEX):
        raise NotInNullspace("H @ nu is not zero")
    if not np.iscomplexobj(A) and not np.iscomplexobj(v) and is_exact(v):
        return _certify(pattern, np.abs(v))
    return _certify(pattern, np.abs(v.astype(np.complex128)))


def _disjoint_permutations(count, M, rng):
    """``count`` permutations of range(M), pairwise disagreeing everywhere."""
    perms = []
    while len(perms) < count:
        p = rng.permutation(M)
        if all(np.all(p != q) for q in perms):
            perms.append(p)
    return perms


def matrix_cover(H, M, seed=0):
    """An M-fold cover of a matrix whose entries have integer magnitudes.

    Entry ``h`` becomes ``h/|h|`` times a sum of ``|h|`` M x M permutation
    matrices with pairwise disjoint supports; zeros become zero blocks. Block
    (j, i) occupies rows ``j*M:(j+1)*M`` and columns ``i*M:(i+1)*M``.
    """
    A = np.asarray(H)
    if A.ndim != 2:
        raise ValueError("H must be a 2-d matrix")
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    M = int(M)
    mag = _magnitude_pattern(A, None)
    if mag.size and M < mag.max():
        raise ValueError(f"M = {M} is smaller than the largest magnitude {mag.max()}")
    rng = np.random.default_rng(seed)
    m, n = A.shape
    dtype = np.complex128 if np.iscomplexobj(A) else (np.int64 if is_exact(A) else np.float64)
    out = np.zeros((m * M, n * M), dtype=dtype)
    rows = np.arange(M)
    for j in range(m):
        for i in range(n):
            if mag[j, i] == 0:
                continue
            unit = A[j, i] / mag[j, i]
            if dtype == np.int64:
                unit = int(np.sign(A[j, i]))
            block = np.zeros((M, M), dtype=np.int64)
            for p in _disjoint_permutations(mag[j, i], M, rng):
                block[rows, p] = 1
            out[j * M:(j + 1) * M, i * M:(i + 1) * M] = unit * block
    return out


def lift(a, M):
    """The M-fold lift: every entry repeated M times in place."""
    return np.repeat(np.asarray(a), M)


def project(a, M):
    """Average each consecutive block of M entries (inverse of :func:`lift`)."""
    a = np.asarray(a)
    if a.shape[0] % M:
        raise ValueError("length must be a multiple of M")
    return a.reshape(-1, M).mean(axis=1)


class BridgeCheck(tuple):
    """``(nu_lifted, certificate)`` with the cover matrix attached."""

    def __new__(cls, nu_lifted, certificate, cover):
        obj = super().__new__(cls, (nu_lifted, certificate))
        obj.cover = cover
        return obj


def lifted_bridge(H, M, nu, seed=0, cover=None):
    """Lift a nullspace vector to an M-fold cover and certify its magnitudes.

    Also checks the converse direction: every basis vector of the nullspace
    of the cover projects into the nullspace of ``H``.
    """
    A = np.asarray(H)
    v = np.asarray(nu)
    if not _residual_ok(A, v, TOL_COMPLEX):
        raise NotInNullspace("H @ nu is not zero")
    Ht = matrix_cover(A, M, seed) if cover is None else np.asarray(cover)
    if Ht.shape != (A.shape[0] * M, A.shape[1] * M):
        raise ValueError("cover has the wrong shape")
    up = lift(v, M)
    if not _residual_ok(Ht, up, TOL_COMPLEX):
        raise NotInNullspace("lifted vector is not in the nullspace of the cover")
    cert = bridge_map_complex(Ht, up)
    N = scipy.linalg.null_space(Ht.astype(np.complex128))
    for col in N.T:
        if not _residual_ok(A, project(col, M), TOL_COMPLEX):
            raise NotInNullspace("projection of a cover nullspace vector left Nullsp(H)")
    return BridgeCheck(up, cert, Ht)


def multi_vector_bridge(H, nus, vecnorm="l2", alphas=None):
    """Combine several nullspace vectors coordinate-wise into one cone point.

    ``omega_i = ||(a_1 nu1_i, ..., a_L nuL_i)||`` with the l1 or l2 norm;
    the scalars ``alphas`` default to all ones and must be nonnegative.
    """
    A = np.asarray(H)
    pattern = _magnitude_pattern(A, (0, 1))
    V = np.atleast_2d(np.asarray(nus))
    if V.shape[1] != A.shape[1]:
        raise ValueError("each vector needs one entry per column of H")
    a = np.ones(V.shape[0]) if alphas is None else np.asarray(alphas, dtype=np.float64)
    if a.shape != (V.shape[0],) or np.any(a < 0):
        raise ValueError("alphas must be one nonnegative scalar per vector")
    for v in V:
        if not _residual_ok(A, v, TOL_COMPLEX):
            raise NotInNullspace("a vector is not in the nullspace of H")
    mags = np.abs(V.astype(np.complex128)) * a[:, None]
    if vecnorm == "l1":
        omega = mags.sum(axis=0)
    elif vecnorm == "l2":
        omega = np.sqrt((mags ** 2).sum(axis=0))
    else:
        raise ValueError("vecnorm must be 'l1' or 'l2'")
    return _certify(pattern, omega)


def lemma5_gate(H, k, cap=10_000, cross_check=True):
    """True iff the minimum BSC pseudo-weight of ``H`` exceeds 2k.

    A true gate certifies the strict nullspace property NSP(k, 1). With
    ``cross_check`` the direct NSP verdict is computed too and a true gate
    that disagrees with it raises ``AssertionError``.
    """
    if k <= 0:
        return True
    w = min_pseudoweight_enumerated(H, "bsc", cap=cap)
    gate = bool(w > 2 * k)
    if cross_check and gate:
        direct = check_nsp_k(np.asarray(H), k, 1, strict=True).holds
        if not direct:
            raise AssertionError("bsc gate passed but the direct NSP check failed")
    return gate
