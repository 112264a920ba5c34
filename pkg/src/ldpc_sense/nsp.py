"""Exact verification of the nullspace property at desk scale.

For a set S and constant C the quantity of interest is

    max  C * ||nu_S||_1 - ||nu_Sbar||_1   over   H nu = 0, ||nu||_1 = 1.

It is computed with one LP per sign pattern on S (the sign of the first
element of S is pinned, since nu and -nu give the same value). Off S the
absolute values are modelled by variables ``t_i >= |nu_i|``, so no sign
enumeration is needed there.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
import math

import numpy as np

from .errors import CapExceeded, HypothesisNotCertified
from .lpsolve import LpProblem, solve
from .rational import is_exact, nullspace_exact, to_fractions

__all__ = [
    "NspCertificate",
    "check_nsp_set",
    "check_nsp_k",
    "thm2_equivalence",
    "nsp_margin_by_circuits",
    "enumerate_circuits",
    "real_rank",
]

# margins this close to zero are re-decided in rational arithmetic
_ZERO_BAND = 1e-9


@dataclass
class NspCertificate:
    """Verdict of a nullspace-property check.

    ``worst_case`` is ``(S, nu, margin)`` for the largest value of
    ``C ||nu_S||_1 - ||nu_Sbar||_1`` found (``nu`` normalized to unit l1
    norm), or None when the nullspace is trivial. When ``holds`` is False the
    vector is exact (Fractions) and reproduces the violation.
    """

    k: int
    C: object
    strict: bool
    holds: bool
    worst_case: tuple = None
    lp_count: int = 0


def real_rank(H):
    A = np.asarray(H)
    if is_exact(A):
        from .rational import rref_exact
        return len(rref_exact(A)[1])
    return int(np.linalg.matrix_rank(A.astype(np.float64)))


def _pattern_lp(H, S, sigma, C, mode):
    A = np.asarray(H)
    m, n = A.shape
    Sbar = [i for i in range(n) if i not in set(S)]
    nt = len(Sbar)
    exact = mode == "rational"
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    Cv = to_fractions([C])[0] if exact else float(C)
    c = [zero] * (n + nt)
    for i, s in zip(S, sigma):
        c[i] = -Cv * s
    for t in range(nt):
        c[n + t] = one
    dtype = object if exact else np.float64
    A_eq = np.zeros((m + 1, n + nt), dtype=dtype)
    if exact:
        A_eq[...] = zero
        A_eq[:m, :n] = to_fractions(A)
    else:
        A_eq[:m, :n] = A.astype(np.float64)
    for i, s in zip(S, sigma):
        A_eq[m, i] = s
    A_eq[m, n:] = one
    b_eq = [zero] * m + [one]
    A_ub = np.zeros((2 * nt, n + nt), dtype=dtype)
    if exact:
        A_ub[...] = zero
    for t, i in enumerate(Sbar):
        A_ub[2 * t, i] = one
        A_ub[2 * t, n + t] = -one
        A_ub[2 * t + 1, i] = -one
        A_ub[2 * t + 1, n + t] = -one
    bounds = [(-math.inf, math.inf)] * n + [(0, math.inf)] * nt
    for i, s in zip(S, sigma):
        bounds[i] = (0, math.inf) if s > 0 else (-math.inf, 0)
    prob = LpProblem(c=c, A=A_eq, b=b_eq, bounds=bounds,
                     A_ub=A_ub if nt else None, b_ub=[zero] * (2 * nt) if nt else None)
    sol = solve(prob, mode=mode)
    if sol.status != "optimal":
        return None
    nu = sol.x[:n]
    return -sol.objective_value, nu


def _normalized(nu):
    total = sum(abs(x) for x in nu)
    if total == 0:
        return nu
    return np.array([x / total for x in nu], dtype=object if isinstance(total, Fraction) else np.float64)


def check_nsp_set(H, S, C=1, strict=True, cap=1 << 15, mode="float"):
    """Nullspace property for one set S.

    Holds iff the maximal margin is < 0 (strict) or <= 0 (non-strict).
    Float LP values within 1e-9 of zero, and all violations, are re-solved
    in rational arithmetic before the verdict is drawn.
    """
    A = np.asarray(H)
    if A.ndim != 2:
        raise ValueError("H must be a 2-d matrix")
    n = A.shape[1]
    S = sorted(set(int(i) for i in S))
    if any(i < 0 or i >= n for i in S):
        raise ValueError("S contains an out-of-range index")
    if C < 0:
        raise ValueError("C must be nonnegative")
    n_patterns = 1 << max(len(S) - 1, 0)
    if n_patterns > cap:
        raise CapExceeded(f"{n_patterns} sign patterns exceed cap {cap}")
    k = len(S)
    if real_rank(A) == n:
        return NspCertificate(k, C, strict, True, None, 0)

    best = None
    count = 0
    tail = list(product((1, -1), repeat=max(len(S) - 1, 0)))
    for rest in tail:
        sigma = (1,) + rest if S else ()
        out = _pattern_lp(A, S, sigma, C, mode)
        count += 1
        if out is None:
            continue
        margin, nu = out
        if mode == "float" and (abs(margin) < _ZERO_BAND or margin > 0):
            exact = _pattern_lp(A, S, sigma, C, "rational")
            if exact is not None:
                margin, nu = exact
        if best is None or margin > best[2]:
            best = (tuple(S), _normalized(nu), margin)
    if best is None:
        return NspCertificate(k, C, strict, True, None, count)
    margin = best[2]
    holds = margin < 0 if strict else margin <= 0
    return NspCertificate(k, C, strict, bool(holds), best, count)


def check_nsp_k(H, k, C=1, strict=True, cap=1 << 15, mode="float"):
    """Nullspace property for every set of size at most k.

    Only sets of size exactly ``min(k, n)`` are checked: the margin can only
    grow when a coordinate moves into S. Returns the certificate of the first
    violating set, or of the set with the largest margin when all pass.
    """
    A = np.asarray(H)
    n = A.shape[1]
    if k <= 0:
        return NspCertificate(0, C, strict, True, None, 0)
    size = min(k, n)
    worst = None
    total = 0
    for S in combinations(range(n), size):
        cert = check_nsp_set(A, S, C, strict, cap=cap, mode=mode)
        total += cert.lp_count
        if cert.worst_case is None:
            # trivial nullspace: vacuous for every S
            return NspCertificate(k, C, strict, True, None, total)
        if not cert.holds:
            cert.k, cert.lp_count = k, total
            return cert
        if worst is None or cert.worst_case[2] > worst[2]:
            worst = cert.worst_case
    return NspCertificate(k, C, strict, True, worst, total)


def enumerate_circuits(H):
    """Minimal-support nullspace vectors (one per support, exact)."""
    A = to_fractions(np.asarray(H))
    n = A.shape[1]
    r = real_rank(np.asarray(H))
    out = []
    for size in range(1, min(r + 1, n) + 1):
        for T in combinations(range(n), size):
            N = nullspace_exact(A[:, list(T)])
            if N.shape[0] != 1 or any(x == 0 for x in N[0]):
                continue
            v = np.array([Fraction(0)] * n, dtype=object)
            v[list(T)] = N[0]
            out.append(v)
    return out


def nsp_margin_by_circuits(H, S, C=1):
    """Maximal NSP margin over the vertices of {H nu = 0, ||nu||_1 <= 1}.

    Those vertices are the circuits scaled to unit l1 norm, and on the unit
    sphere the margin equals (C + 1) ||nu_S||_1 - 1, a convex function, so
    its maximum over the polytope is attained at a vertex. Returns None for a
    trivial nullspace.
    """
    S = set(int(i) for i in S)
    Cf = Fraction(C)
    best = None
    for c in enumerate_circuits(H):
        total = sum(abs(x) for x in c)
        on = sum(abs(c[i]) for i in S)
        margin = (Cf + 1) * on / total - 1
        if best is None or margin > best:
            best = margin
    return best


def thm2_equivalence(H, k, trials=100, seed=0):
    """Exact-recovery check for a matrix with a certified strict NSP(k, 1).

    Draws ``trials`` random k-sparse vectors (uniform random support, values
    uniform in [-1, 1] without 0) and requires basis pursuit to return each
    one exactly and to agree with the exhaustive sparsest solution.
    """
    from .cslpd import MeasurementInstance, cs_lpd, cs_opt_bruteforce

    A = np.asarray(H)
    n = A.shape[1]
    if k <= 0:
        return True
    cert = check_nsp_k(A, k, 1, strict=True)
    if not cert.holds:
        raise HypothesisNotCertified(f"strict NSP({k}, 1) does not hold")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        e = np.zeros(n)
        S = rng.choice(n, size=k, replace=False)
        vals = rng.uniform(-1, 1, size=k)
        vals[vals == 0] = 0.5
        e[S] = vals
        inst = MeasurementInstance.from_signal(A, e)
        res = cs_lpd(inst)
        if not res.exact:
            return False
        e_opt, _ = cs_opt_bruteforce(inst, kmax=k)
        if np.max(np.abs(np.asarray(e_opt, dtype=np.float64) - e)) > 1e-6:
            return False
    return True
