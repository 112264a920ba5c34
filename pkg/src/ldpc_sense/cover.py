"""Graph covers: lifting and projection, and the cover reformulations of
LP decoding and basis pursuit."""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cclpd import cclpd_decode, mld_bruteforce
from .errors import InfeasibleError
from .gf2 import as_binary_matrix, enumerate_codewords
from .lpsolve import minimize_l1
from .rational import to_fractions
from .tanner import TannerGraph

__all__ = [
    "CoverSpec",
    "LiftedMatrix",
    "CoverBounds",
    "lift_vector",
    "project",
    "make_cover",
    "thm15_check",
    "cclpd_graphcover_check",
    "zero_infinity",
    "csrel_lower_bound_check",
]

# slack allowed when comparing LP optima across base and cover
TOL_COVER = 1e-7


@dataclass(frozen=True)
class CoverSpec:
    """Edge permutations of an M-cover; ``perms[(j, i)]`` permutes range(M)."""

    M: int
    perms: dict
    seed: int = 0

    def __post_init__(self):
        for key, p in self.perms.items():
            if sorted(np.asarray(p).tolist()) != list(range(self.M)):
                raise ValueError(f"permutation for edge {key} is not a bijection")


@dataclass(frozen=True)
class LiftedMatrix:
    base_shape: tuple
    M: int
    matrix: np.ndarray


def lift_vector(a, M):
    """``a^(up M)``: entry i is copied to positions i*M, ..., i*M + M - 1."""
    if M < 1:
        raise ValueError("M must be positive")
    return np.repeat(np.asarray(a), M)


def project(a_tilde, M):
    """Mean over each block of M consecutive entries."""
    a = np.asarray(a_tilde)
    if M < 1 or a.shape[0] % M:
        raise ValueError(f"length {a.shape[0]} is not a multiple of M = {M}")
    if a.dtype == object:
        return np.array([sum(a[i:i + M]) / M for i in range(0, a.shape[0], M)], dtype=object)
    return a.reshape(-1, M).mean(axis=1)


def _base_matrix(g):
    if isinstance(g, TannerGraph):
        return g.to_matrix().astype(np.int64)
    A = np.asarray(g)
    if A.ndim != 2:
        raise ValueError("expected a TannerGraph or a 2-d matrix")
    return A


def make_cover(g, M, seed=0):
    """A random M-cover of a Tanner graph (or of a {0, +-1} matrix).

    Every edge (j, i) gets a uniformly random permutation of range(M) and
    block (j, i) of the lifted matrix is ``h_ji`` times its permutation
    matrix. ``M = 1`` reproduces the base matrix.
    """
    A = _base_matrix(g)
    if not np.isin(A, (-1, 0, 1)).all():
        raise ValueError("entries must lie in {0, 1, -1}")
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    M = int(M)
    rng = np.random.default_rng(seed)
    m, n = A.shape
    out = np.zeros((m * M, n * M), dtype=np.int64)
    perms = {}
    rows = np.arange(M)
    for j, i in zip(*np.nonzero(A)):
        p = rng.permutation(M)
        perms[(int(j), int(i))] = p
        out[j * M + rows, i * M + p] = A[j, i]
    return CoverSpec(M, perms, seed), LiftedMatrix((m, n), M, out)


def _cover_seeds(covers, M_set, seed):
    """Deterministic (M, seed) pairs for a batch of sampled covers."""
    rng = np.random.default_rng(seed)
    Ms = list(M_set)
    return [(int(Ms[rng.integers(len(Ms))]), int(rng.integers(2**63))) for _ in range(covers)]


def _l1(x):
    return sum(abs(v) for v in x)


def thm15_check(H, s, covers=50, M_set=(2, 3), seed=0, mode="float"):
    """Basis pursuit on covers never beats basis pursuit on the base matrix.

    For each sampled cover, ``min (1/M) ||e~||_1`` subject to
    ``H~ e~ = s^(up M)`` must equal the base optimum: it can't be smaller
    (its projection is base-feasible with no larger l1 norm) and the lift of
    the base optimum attains it.
    """
    A = np.asarray(H)
    try:
        _, base = minimize_l1(A, s, mode=mode)
    except InfeasibleError:
        raise InfeasibleError("base problem is infeasible") from None
    s_arr = to_fractions(s) if mode == "rational" else np.asarray(s, dtype=np.float64)
    for M, cseed in _cover_seeds(covers, M_set, seed):
        _, lifted = make_cover(A, M, cseed)
        Ht = lifted.matrix
        e_t, val = minimize_l1(Ht, lift_vector(s_arr, M), mode=mode)
        val = val / M
        phi = project(e_t, M)
        if mode == "rational":
            if any(x != 0 for x in to_fractions(A) @ phi - s_arr):
                return False
            if not (val == base and _l1(phi) >= base and _l1(phi) <= val):
                return False
        else:
            resid = np.abs(A @ phi - s_arr).max(initial=0.0)
            if resid > 1e-6 * (1 + np.abs(s_arr).max(initial=0.0)):
                return False
            if val < base - TOL_COVER or val > base + TOL_COVER:
                return False
            if _l1(phi) < base - TOL_COVER or _l1(phi) > val + TOL_COVER:
                return False
    return True


@dataclass
class CoverBounds:
    """Sampled graph-cover decoding cost against the base ML and LP costs."""

    cover_cost: float
    ml_cost: float
    lp_cost: float
    per_cover: list = field(default_factory=list)

    @property
    def holds(self):
        return self.lp_cost - TOL_COVER <= self.cover_cost <= self.ml_cost + TOL_COVER

    def __bool__(self):
        return self.holds


def cclpd_graphcover_check(H, lam, covers=20, M_set=(2,), seed=0, cap=1 << 16):
    """Sandwich the sampled graph-cover decoding cost between LP and ML.

    Over the sampled covers, the smallest ``(1/M) <lam^(up M), x~>`` over
    codewords x~ of the cover must lie between the LP decoding cost and the
    ML cost of the base code. Sampling can only give these bounds, not the
    equality with LP decoding that holds over all covers.
    """
    A = as_binary_matrix(H)
    lam = np.asarray(lam, dtype=np.float64)
    ml = mld_bruteforce(A, lam, cap=cap)
    ml_cost = float(ml @ lam)
    lp_cost = float(cclpd_decode(A, lam).cost)
    per = []
    for M, cseed in _cover_seeds(covers, M_set, seed):
        _, lifted = make_cover(A, M, cseed)
        words = enumerate_codewords(lifted.matrix, cap=cap)
        per.append((M, float((words @ lift_vector(lam, M)).min()) / M))
    best = min((c for _, c in per), default=ml_cost)
    return CoverBounds(best, ml_cost, lp_cost, per)


def zero_infinity(a):
    """``||a||_0 * ||a||_inf``, an upper bound on ``||a||_1``."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if a.dtype == object:
        nz = sum(1 for x in a if x != 0)
        return nz * max(abs(x) for x in a)
    return float(np.count_nonzero(a) * np.abs(a).max())


def _spread_fiber(value, M, rng):
    """M numbers with mean ``value``: constant, concentrated or random split."""
    kind = rng.integers(3)
    if kind == 0 or value == 0:
        return np.full(M, value, dtype=np.float64)
    if kind == 1:
        out = np.zeros(M)
        out[rng.integers(M)] = M * value
        return out
    return M * value * rng.dirichlet(np.ones(M))


def csrel_lower_bound_check(H, s, covers=20, M_set=(2, 3), seed=0, samples=5):
    """Zero-infinity cost on covers never drops below the basis-pursuit value.

    For sampled covers and sampled e~ whose syndrome s~ = H~ e~ satisfies
    ``phi_M(s~) = s``, checks ``(1/M) |e~|_{0,inf} >= min ||e||_1``. The
    samples start from base-feasible points (the base optimum plus random
    nullspace directions) and redistribute each fiber while keeping its mean.
    """
    A = np.asarray(H)
    if not np.isin(A, (-1, 0, 1)).all():
        raise ValueError("entries must lie in {0, 1, -1}")
    s = np.asarray(s, dtype=np.float64)
    try:
        e0, base = minimize_l1(A, s)
    except InfeasibleError:
        raise InfeasibleError("base problem is infeasible") from None
    base = float(base)
    e0 = np.asarray(e0, dtype=np.float64)
    N = scipy.linalg.null_space(A.astype(np.float64))
    rng = np.random.default_rng(seed)
    for M, cseed in _cover_seeds(covers, M_set, seed):
        _, lifted = make_cover(A, M, cseed)
        Ht = lifted.matrix
        for t in range(samples):
            e = e0.copy()
            if t and N.shape[1]:
                e = e + N @ rng.standard_normal(N.shape[1])
            e_t = np.concatenate([_spread_fiber(v, M, rng) for v in e])
            s_t = Ht @ e_t
            if np.abs(project(s_t, M) - s).max(initial=0.0) > 1e-8 * (1 + np.abs(s).max(initial=0.0)):
                raise AssertionError("sampled syndrome does not project onto s")
            if zero_infinity(e_t) / M < base - TOL_COVER:
                return False
    return True
