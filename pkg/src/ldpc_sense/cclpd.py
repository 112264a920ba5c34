"""Channel-coding side: channels, LLRs, ML and LP decoding over GF(2) codes."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import math

import numpy as np

from .errors import CapExceeded, DimensionMismatch
from .fundamental import cone_membership, polytope_cuts, polytope_vertices
from .gf2 import as_binary_matrix, enumerate_codewords, syndrome_gf2
from .lpsolve import LpProblem, solve

__all__ = [
    "ChannelModel",
    "DecodeResult",
    "ERASED",
    "BEC_LLR",
    "llr",
    "transmit",
    "mld_bruteforce",
    "cclpd_decode",
    "cone_membership",
    "lemma2_certificate",
    "hard_decision_and_syndrome",
    "mld3_equivalence_check",
    "peel_bec",
]

# received-symbol marker for an erasure
ERASED = -1
# stand-in for an infinite LLR on unerased BEC symbols
BEC_LLR = 1e6


@dataclass(frozen=True)
class ChannelModel:
    """Binary-input channel.

    ``bsc``: crossover probability ``param`` in (0, 1/2).
    ``awgn``: linear Es/N0 ``param`` > 0 with BPSK 0 -> +1, 1 -> -1 and noise
    variance 1 / (2 * snr).
    ``bec``: erasure probability ``param`` in [0, 1).
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == "bsc":
            if not 0 < self.param < 0.5:
                raise ValueError("BSC crossover probability must lie in (0, 1/2)")
        elif self.kind == "awgn":
            if not self.param > 0:
                raise ValueError("AWGN snr must be positive")
        elif self.kind == "bec":
            if not 0 <= self.param < 1:
                raise ValueError("BEC erasure probability must lie in [0, 1)")
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")

    @classmethod
    def bsc(cls, epsilon):
        return cls("bsc", epsilon)

    @classmethod
    def awgn(cls, snr):
        return cls("awgn", snr)

    @classmethod
    def bec(cls, p):
        return cls("bec", p)


@dataclass
class DecodeResult:
    point: np.ndarray
    is_integral: bool
    cost: object

    @property
    def codeword(self):
        """The point rounded to bits (meaningful when ``is_integral``)."""
        return np.rint(np.asarray(self.point, dtype=np.float64)).astype(np.uint8)


def llr(ch, y):
    """Log-likelihood ratios log(P(y|0) / P(y|1)) of a received word."""
    y = np.asarray(y)
    if ch.kind == "bsc":
        if not np.all((y == 0) | (y == 1)):
            raise ValueError("BSC output must be binary")
        mag = math.log((1 - ch.param) / ch.param)
        return np.where(y == 0, mag, -mag).astype(np.float64)
    if ch.kind == "awgn":
        y = y.astype(np.float64)
        if not np.all(np.isfinite(y)):
            raise ValueError("AWGN output must be finite")
        return 4.0 * ch.param * y
    if not np.all((y == 0) | (y == 1) | (y == ERASED)):
        raise ValueError("BEC output must be 0, 1 or ERASED")
    return np.where(y == ERASED, 0.0, np.where(y == 0, BEC_LLR, -BEC_LLR))


def transmit(ch, x, rng):
    """Send the binary word ``x`` through ``ch`` using generator ``rng``."""
    x = np.asarray(x, dtype=np.int64)
    if ch.kind == "bsc":
        return (x ^ (rng.random(x.shape) < ch.param)).astype(np.int64)
    if ch.kind == "awgn":
        sigma = math.sqrt(1.0 / (2.0 * ch.param))
        return (1.0 - 2.0 * x) + sigma * rng.standard_normal(x.shape)
    return np.where(rng.random(x.shape) < ch.param, ERASED, x)


def _lex_first(words):
    """Row of ``words`` that comes first in lexicographic order."""
    order = np.lexsort(words.T[::-1])
    return words[order[0]]


def mld_bruteforce(H, lam, cap=1 << 16):
    """Codeword minimizing <lam, x>; ties go to the lexicographically first."""
    A = as_binary_matrix(H)
    lam = _llr_vector(lam, A.shape[1])
    words = enumerate_codewords(A, cap=cap)
    cost = words.astype(np.float64) @ lam
    best = cost.min()
    ties = words[np.isclose(cost, best, rtol=1e-12, atol=1e-12)]
    return _lex_first(ties)


def _llr_vector(lam, n):
    arr = np.asarray(lam, dtype=np.float64).reshape(-1)
    if arr.shape[0] != n:
        raise DimensionMismatch(f"expected {n} LLRs, got {arr.shape[0]}")
    return arr


def cclpd_decode(H, lam, mode="float", rule="bland"):
    """Minimize <lam, x> over the fundamental polytope.

    The polytope is given by the odd-subset cuts of each check plus the unit
    box; rows heavier than 12 raise :class:`~ldpc_sense.errors.RowTooDense`.
    The returned point is the simplex vertex reached.
    """
    A = as_binary_matrix(H)
    n = A.shape[1]
    lam_arr = np.asarray(lam, dtype=object if mode == "rational" else np.float64).reshape(-1)
    if lam_arr.shape[0] != n:
        raise DimensionMismatch(f"expected {n} LLRs, got {lam_arr.shape[0]}")
    A_ub, b_ub = polytope_cuts(A)
    prob = LpProblem(c=list(lam_arr), bounds=[(0, 1)] * n,
                     A_ub=A_ub if len(b_ub) else None, b_ub=b_ub if len(b_ub) else None)
    sol = solve(prob, mode=mode, rule=rule)
    if sol.status != "optimal":  # the polytope is nonempty and bounded
        raise RuntimeError(f"unexpected LP status {sol.status}")
    point = sol.x
    pf = np.asarray(point, dtype=np.float64)
    integral = bool(np.all(np.minimum(np.abs(pf), np.abs(pf - 1)) <= 1e-6))
    return DecodeResult(point, integral, sol.objective_value)


def lemma2_certificate(H, S, cap=10_000):
    """Sufficient condition for LP decoding to correct the error pattern S.

    True iff every nonzero vertex of the fundamental polytope puts strictly
    less mass on ``S`` than off it (the cone is generated by these vertices).
    """
    A = as_binary_matrix(H)
    S = sorted(set(int(i) for i in S))
    if any(i < 0 or i >= A.shape[1] for i in S):
        raise DimensionMismatch("S contains an out-of-range index")
    inside = np.zeros(A.shape[1], dtype=bool)
    inside[S] = True
    for v in polytope_vertices(A, cap=cap):
        on = sum((x for x, f in zip(v, inside) if f), Fraction(0))
        off = sum((x for x, f in zip(v, inside) if not f), Fraction(0))
        if on + off == 0:
            continue
        if not on < off:
            return False
    return True


def hard_decision_and_syndrome(lam, H):
    """Hard decisions (1 iff lam_i < 0, so zeros go to 0) and their syndrome."""
    A = as_binary_matrix(H)
    lam = _llr_vector(lam, A.shape[1])
    ybar = (lam < 0).astype(np.uint8)
    return ybar, syndrome_gf2(A, ybar)


def _all_binary(n):
    return np.array(list(product((0, 1), repeat=n)), dtype=np.uint8)


def mld3_equivalence_check(H, lam, cap=1 << 16):
    """Compare ML decoding with its syndrome-based reformulation.

    Side one: all codewords x' minimizing <lam, x'>. Side two: all e' with
    H e' = s (mod 2) minimizing the sum of |lam_i| over supp(e'), found by
    scanning every binary word of length n. The two minimizer sets must be
    related by e' = ybar + x' (mod 2).
    """
    A = as_binary_matrix(H)
    n = A.shape[1]
    lam = _llr_vector(lam, n)
    if (1 << n) > cap:
        raise CapExceeded(f"2**{n} words exceed cap {cap}")
    # floats are dyadic rationals: scale to integers so ties are exact on both sides
    fr = [Fraction(float(x)) for x in lam]
    scale = math.lcm(*(f.denominator for f in fr))
    L = np.array([int(f * scale) for f in fr], dtype=object)
    words = enumerate_codewords(A, cap=cap)
    cost = words.astype(object) @ L
    ml_set = words[cost == cost.min()]

    ybar, s = hard_decision_and_syndrome(lam, A)
    allw = _all_binary(n)
    synd = (allw.astype(np.int64) @ A.T.astype(np.int64)) % 2
    coset = allw[np.all(synd == s, axis=1)]
    wcost = coset.astype(object) @ np.abs(L)
    e_set = coset[wcost == wcost.min()]

    mapped = {tuple(((ybar + x) % 2).tolist()) for x in ml_set}
    return mapped == {tuple(e.tolist()) for e in e_set}


def peel_bec(H, y):
    """Iterative erasure filling: a check with one erased neighbour fixes it."""
    A = as_binary_matrix(H)
    out = np.asarray(y, dtype=np.int64).copy()
    if out.shape[0] != A.shape[1]:
        raise DimensionMismatch("received word length does not match H")
    checks = [np.flatnonzero(row) for row in A]
    changed = True
    while changed:
        changed = False
        for I in checks:
            erased = I[out[I] == ERASED]
            if len(erased) == 1:
                known = I[out[I] != ERASED]
                out[erased[0]] = int(out[known].sum() % 2)
                changed = True
    return out
