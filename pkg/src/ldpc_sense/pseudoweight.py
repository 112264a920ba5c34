"""Pseudo-weights of nonnegative vectors and minimum weights of a matrix.

Exact inputs (ints or Fractions) give exact Fraction results; float inputs
give floats.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
import numbers

import numpy as np

from .errors import CapExceeded
from .fundamental import cone_inequalities, cone_margin, polytope_vertices
from .lpsolve import LpProblem, TOL_FEAS, solve

__all__ = [
    "WeightReport",
    "PseudoCodeword",
    "weights",
    "bsc_prime_relation_check",
    "lemma4_check",
    "min_maxfrac_weight",
    "min_pseudoweight_enumerated",
    "WEIGHT_KINDS",
]

WEIGHT_KINDS = ("awgnc", "bsc", "bsc_prime", "bec", "maxfrac")


@dataclass(frozen=True)
class WeightReport:
    awgnc: object
    bsc: object
    bsc_prime: int
    bec: int
    maxfrac: object

    def as_tuple(self):
        return (self.awgnc, self.bsc, self.bsc_prime, self.bec, self.maxfrac)

    def __getitem__(self, kind):
        return getattr(self, kind)


@dataclass(frozen=True)
class PseudoCodeword:
    """A vector of the fundamental cone of ``H`` with its membership margin."""

    omega: np.ndarray
    H: np.ndarray
    margin: float

    @classmethod
    def certify(cls, H, omega, tol=TOL_FEAS):
        margin = cone_margin(H, omega)
        if margin < -tol:
            raise ValueError(f"vector is not in the fundamental cone (margin {margin:.3g})")
        return cls(np.asarray(omega), np.asarray(H), margin)

    def weights(self):
        return weights(self.omega)


def _entries(omega):
    arr = np.asarray(omega, dtype=object).reshape(-1)
    exact = all(isinstance(x, (numbers.Integral, Fraction)) for x in arr)
    if exact:
        vals = [Fraction(x) for x in arr]
    else:
        vals = [float(x) for x in arr]
    if any(v < 0 for v in vals):
        raise ValueError("pseudo-weights are defined for nonnegative vectors only")
    return vals, exact


def weights(omega):
    """All five weight functionals of a nonnegative vector.

    * awgnc  = ||w||_1^2 / ||w||_2^2
    * bsc    = 2 F^-1(||w||_1 / 2), F the piecewise-linear cumulative of the
      entries sorted in decreasing order (infimum preimage)
    * bsc_prime = 2e or 2e - 1, e the smallest prefix whose mass reaches the rest
    * bec    = |supp(w)|
    * maxfrac = ||w||_1 / ||w||_inf

    All five are zero for the zero vector.
    """
    vals, exact = _entries(omega)
    zero = Fraction(0) if exact else 0.0
    total = sum(vals, zero)
    if total == 0:
        return WeightReport(zero, zero, 0, 0, zero)
    desc = sorted(vals, reverse=True)
    sq = sum((v * v for v in vals), zero)
    awgnc = total * total / sq
    maxfrac = total / desc[0]
    bec = sum(1 for v in vals if v != 0)

    half = total / 2
    cum = zero
    bsc = None
    for i, v in enumerate(desc):
        if cum + v >= half:
            bsc = 2 * (i + (half - cum) / v)
            break
        cum += v

    head = zero
    bsc_prime = None
    for e, v in enumerate(desc, start=1):
        head += v
        tail = total - head
        if head >= tail:
            bsc_prime = 2 * e if _equal(head, tail, exact) else 2 * e - 1
            break
    return WeightReport(awgnc, bsc, bsc_prime, bec, maxfrac)


def _equal(a, b, exact):
    if exact:
        return a == b
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-15)


def bsc_prime_relation_check(omega):
    """Check the stated link between the two BSC pseudo-weights."""
    rep = weights(omega)
    if rep.bec == 0:
        raise ValueError("omega must be nonzero")
    bp, b = rep.bsc_prime, rep.bsc
    exact = isinstance(b, Fraction)
    if bp % 2 == 0:
        return b == bp if exact else math.isclose(b, bp, rel_tol=1e-9, abs_tol=1e-12)
    return bp - 1 < b < bp + 1


def lemma4_check(H, omega, S):
    """Balance of a pseudo-codeword on small sets.

    If ``|S|`` is below half the BSC (or BSC') pseudo-weight, the mass of
    ``omega`` on ``S`` must be strictly below the mass off ``S``. Returns the
    outcome of that assertion, or True when the size condition does not apply.
    """
    w = np.asarray(omega)
    if not cone_margin(H, np.asarray(w, dtype=np.float64)) >= -TOL_FEAS:
        raise ValueError("omega is not in the fundamental cone")
    rep = weights(w)
    if rep.bec == 0:
        raise ValueError("omega must be nonzero")
    S = sorted(set(int(i) for i in S))
    if not (2 * len(S) < rep.bsc or 2 * len(S) < rep.bsc_prime):
        return True
    vals, exact = _entries(w)
    inside = sum((vals[i] for i in S), Fraction(0) if exact else 0.0)
    total = sum(vals, Fraction(0) if exact else 0.0)
    return inside < total - inside


def _weight_value(vec, kind):
    return weights(vec)[kind]


def min_maxfrac_weight(H, mode="float"):
    """Minimum max-fractional weight over the fundamental cone, by LP.

    For every coordinate i, minimize sum(w) over the cone subject to
    ``w_i = 1``; the smallest of these optima is the minimum. Returns
    ``math.inf`` when the cone is {0}.
    """
    A = np.asarray(H)
    n = A.shape[1]
    G = cone_inequalities(A)[n:]
    one = Fraction(1) if mode == "rational" else 1.0
    best = None
    for i in range(n):
        eq = np.zeros((1, n), dtype=np.int64)
        eq[0, i] = 1
        prob = LpProblem(c=[one] * n, A=eq, b=[1], A_ub=-G if len(G) else None,
                         b_ub=[0] * len(G) if len(G) else None)
        sol = solve(prob, mode=mode)
        if sol.status == "optimal" and (best is None or sol.objective_value < best):
            best = sol.objective_value
    return math.inf if best is None else best


def min_pseudoweight_enumerated(H, kind, cap=10_000):
    """Minimum of a weight functional over the nonzero vertices of the polytope.

    Every functional is invariant under positive scaling, so this equals the
    minimum over the whole cone. Exact (Fraction) arithmetic throughout.
    Raises :class:`CapExceeded` when the vertex count exceeds ``cap``.
    """
    if kind not in WEIGHT_KINDS:
        raise ValueError(f"unknown weight kind {kind!r}")
    verts = polytope_vertices(H, cap=cap)
    if len(verts) > cap:
        raise CapExceeded(f"{len(verts)} vertices exceed cap {cap}")
    vals = [_weight_value(v, kind) for v in verts if any(v)]
    return min(vals) if vals else math.inf
