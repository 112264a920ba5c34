"""Compressed-sensing side: sparsest-solution oracle, basis pursuit, and the
l1/l1, l2/l1 and linf/l1 guarantees with their certificates."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import hashlib
import math

import numpy as np

from .errors import HypothesisNotCertified, InfeasibleError, NoSolutionFound
from .lpsolve import TOL_FEAS, minimize_l1
from .nsp import check_nsp_k
from .pseudoweight import min_maxfrac_weight, min_pseudoweight_enumerated
from .rational import is_exact, solve_exact, to_fractions

__all__ = [
    "MeasurementInstance",
    "RecoveryResult",
    "GuaranteeCertificate",
    "EXACT_TOL",
    "cs_opt_bruteforce",
    "cs_lpd",
    "thm3_bound",
    "thm6_bound",
    "thm7_bound",
    "certify_guarantee",
    "guarantee_bound",
    "verify_guarantee",
    "largest_k_set",
]

EXACT_TOL = 1e-6
# auto pivot rule: Bland below this many tableau entries, lexicographic Dantzig above
_AUTO_RULE_SIZE = 20_000


@dataclass
class MeasurementInstance:
    H: np.ndarray
    e_true: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.H)
        if H.ndim != 2:
            raise ValueError("H must be a 2-d matrix")
        self.H = H
        self.e_true = None if self.e_true is None else np.asarray(self.e_true)
        self.s = np.asarray(self.s)
        if self.s.shape != (H.shape[0],):
            raise ValueError("s must have one entry per row of H")
        if self.e_true is not None:
            if self.e_true.shape != (H.shape[1],):
                raise ValueError("e_true must have one entry per column of H")
            resid = H.astype(np.float64) @ self.e_true.astype(np.float64) - self.s.astype(np.float64)
            if np.max(np.abs(resid), initial=0.0) > TOL_FEAS * (1 + np.max(np.abs(self.s.astype(np.float64)), initial=0.0)):
                raise ValueError("s is not consistent with H @ e_true")

    @classmethod
    def from_signal(cls, H, e):
        H = np.asarray(H)
        e = np.asarray(e)
        if is_exact(H) and is_exact(e):
            s = to_fractions(H) @ to_fractions(e)
        else:
            s = H.astype(np.float64) @ e.astype(np.float64)
        return cls(H, e, s)


@dataclass
class RecoveryResult:
    e_hat: np.ndarray
    l1_value: float
    exact: bool = None
    error: dict = field(default_factory=dict)


def cs_opt_bruteforce(inst, kmax=None, tol=1e-9):
    """Sparsest exact solution of ``H e = s`` by support enumeration.

    Supports are tried in increasing size, lexicographically within a size;
    the first solvable one wins. Integer/Fraction data are solved exactly,
    float data by least squares with a relative residual tolerance.
    Returns ``(e, k)``.
    """
    H, s = inst.H, inst.s
    m, n = H.shape
    kmax = n if kmax is None else min(kmax, n)
    exact = is_exact(H) and is_exact(s)
    if exact:
        Hq, sq = to_fractions(H), to_fractions(s)
        if all(x == 0 for x in sq):
            return np.array([Fraction(0)] * n, dtype=object), 0
    else:
        Hf, sf = H.astype(np.float64), s.astype(np.float64)
        scale = 1.0 + np.max(np.abs(sf), initial=0.0)
        if np.max(np.abs(sf), initial=0.0) <= tol:
            return np.zeros(n), 0
    for k in range(1, kmax + 1):
        for S in combinations(range(n), k):
            cols = list(S)
            if exact:
                z = solve_exact(Hq[:, cols], sq)
                if z is None:
                    continue
                e = np.array([Fraction(0)] * n, dtype=object)
            else:
                z, *_ = np.linalg.lstsq(Hf[:, cols], sf, rcond=None)
                if np.max(np.abs(Hf[:, cols] @ z - sf)) > tol * scale:
                    continue
                e = np.zeros(n)
            e[cols] = z
            return e, k
    raise NoSolutionFound(f"no solution with at most {kmax} nonzeros")


def _rule_for(shape, rule):
    if rule != "auto":
        return rule
    m, n = shape
    return "bland" if (m + 1) * (2 * n + m + 1) <= _AUTO_RULE_SIZE else "dantzig"


def cs_lpd(inst, mode="float", rule="auto"):
    """Basis pursuit: the minimum-l1 solution of ``H e = s``.

    ``rule="auto"`` uses Bland's rule for small problems and the Dantzig
    rule (with stall perturbation) for large ones.
    """
    H = inst.H
    try:
        e_hat, value = minimize_l1(H, inst.s, mode=mode, rule=_rule_for(H.shape, rule))
    except InfeasibleError:
        raise InfeasibleError("measurements are inconsistent with H") from None
    res = RecoveryResult(e_hat, value)
    if inst.e_true is not None:
        diff = np.asarray(e_hat, dtype=np.float64) - inst.e_true.astype(np.float64)
        res.error = {
            "l1": float(np.abs(diff).sum()),
            "l2": float(np.sqrt((diff ** 2).sum())),
            "linf": float(np.abs(diff).max(initial=0.0)),
        }
        res.exact = res.error["linf"] <= EXACT_TOL
    return res


def largest_k_set(e, k):
    """Indices of the k largest-magnitude entries (ties to the lower index)."""
    e = np.abs(np.asarray(e, dtype=np.float64))
    order = np.lexsort((np.arange(e.size), -e))
    return sorted(int(i) for i in order[:k])


def _tail_l1(e, S):
    e = np.asarray(e, dtype=np.float64)
    mask = np.ones(e.size, dtype=bool)
    mask[list(S)] = False
    return float(np.abs(e[mask]).sum())


def thm3_bound(C, e_true, S):
    """l1 error bound 2 (C+1)/(C-1) ||e_Sbar||_1 under NSP<=(|S|, C), C > 1."""
    if not C > 1:
        raise ValueError("the l1/l1 guarantee needs C > 1")
    return 2.0 * (C + 1) / (C - 1) * _tail_l1(e_true, S)


def thm6_bound(Cprime, k, e_true, S):
    """l2 error bound C''/sqrt(k) ||e_Sbar||_1 with C'' = 1/(sqrt(C'/4k) - 1)."""
    if not Cprime > 4 * k:
        raise ValueError("the l2/l1 guarantee needs C' > 4k")
    Cpp = 1.0 / (math.sqrt(Cprime / (4.0 * k)) - 1.0)
    return Cpp / math.sqrt(k) * _tail_l1(e_true, S)


def thm7_bound(Cprime, k, e_true, S):
    """linf error bound C''/k ||e_Sbar||_1 with C'' = 1/(C'/2k - 1)."""
    if not Cprime > 2 * k:
        raise ValueError("the linf/l1 guarantee needs C' > 2k")
    Cpp = 1.0 / (Cprime / (2.0 * k) - 1.0)
    return Cpp / k * _tail_l1(e_true, S)


def _matrix_key(H):
    A = np.ascontiguousarray(np.asarray(H, dtype=np.float64))
    return hashlib.sha1(repr(A.shape).encode() + A.tobytes()).hexdigest()


@dataclass(frozen=True)
class GuaranteeCertificate:
    """Verified hypothesis of one of the three recovery guarantees.

    ``kind`` is "thm3" (NSP<=(k, C)), "thm6" (minimum AWGNC pseudo-weight
    >= C') or "thm7" (minimum max-fractional weight >= C').
    """

    kind: str
    k: int
    constant: float
    holds: bool
    matrix_key: str


_NORM_OF = {"thm3": "l1", "thm6": "l2", "thm7": "linf"}


def certify_guarantee(H, kind, k, constant=None, cap=10_000):
    """Check the hypothesis of a guarantee for ``H`` and sparsity ``k``.

    For thm6/thm7 the constant defaults to the certified minimum weight,
    the largest admissible value.
    """
    A = np.asarray(H)
    if kind == "thm3":
        if constant is None or not constant > 1:
            raise ValueError("thm3 needs an explicit constant C > 1")
        holds = check_nsp_k(A, k, constant, strict=False).holds
        return GuaranteeCertificate(kind, k, float(constant), holds, _matrix_key(A))
    if kind == "thm6":
        w = min_pseudoweight_enumerated(A, "awgnc", cap=cap)
        need = 4 * k
    elif kind == "thm7":
        w = min_maxfrac_weight(A, mode="rational")
        need = 2 * k
    else:
        raise ValueError(f"unknown guarantee {kind!r}")
    C = float(w) if constant is None else constant
    holds = C > need and w >= C
    return GuaranteeCertificate(kind, k, C, bool(holds), _matrix_key(A))


def guarantee_bound(cert, e_true, S):
    if len(S) != cert.k:
        raise ValueError(f"S must have exactly k = {cert.k} elements")
    if cert.kind == "thm3":
        return thm3_bound(cert.constant, e_true, S)
    if cert.kind == "thm6":
        return thm6_bound(cert.constant, cert.k, e_true, S)
    return thm7_bound(cert.constant, cert.k, e_true, S)


def verify_guarantee(inst, S, bound_kind, bound_value, certificate, tol=1e-7):
    """Run basis pursuit and test the error against a certified bound.

    ``certificate`` must come from :func:`certify_guarantee` for the same
    matrix and kind and must hold; otherwise
    :class:`HypothesisNotCertified` is raised and no claim is made.
    """
    if (certificate is None or not certificate.holds or certificate.kind != bound_kind
            or certificate.matrix_key != _matrix_key(inst.H)):
        raise HypothesisNotCertified(f"no valid {bound_kind} certificate for this matrix")
    if len(S) > certificate.k or (bound_kind != "thm3" and len(S) != certificate.k):
        raise HypothesisNotCertified("S does not match the certified sparsity")
    res = cs_lpd(inst)
    return res.error[_NORM_OF[bound_kind]] <= bound_value + tol
