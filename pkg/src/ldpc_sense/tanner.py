"""Tanner graphs: construction, girth, expansion certificates and alist I/O."""

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .errors import AlistParseError, CapExceeded, ConstructionError, ExpansionTooWeak

__all__ = [
    "TannerGraph",
    "ConstructionSpec",
    "ExpansionReport",
    "GIRTH_INFINITE",
    "construct",
    "girth",
    "girth_nonbacktracking",
    "check_expansion",
    "corollary1_k_bound",
    "read_alist",
    "write_alist",
    "hamming_matrix",
    "chain_matrix",
]

# girth of a forest
GIRTH_INFINITE = math.inf

_PEG_ATTEMPTS = 100

KINDS = ("gallager_regular", "girth_peg", "random_column_weight", "dense_pm1")


class TannerGraph:
    """Bipartite graph between variable nodes (columns) and check nodes (rows).

    Any nonzero matrix entry is an edge, so signed and complex matrices give
    the graph of their support.
    """

    def __init__(self, H):
        A = np.asarray(H)
        if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
            raise ValueError(f"expected a nonempty 2-d matrix, got shape {A.shape}")
        self.n_chk, self.n_var = A.shape
        support = A != 0
        self.checks = [np.flatnonzero(row) for row in support]
        self.variables = [np.flatnonzero(col) for col in support.T]
        self._support = support

    @classmethod
    def from_matrix(cls, H):
        return cls(H)

    def to_matrix(self):
        return self._support.astype(np.uint8)

    @property
    def n_edges(self):
        return int(self._support.sum())

    def var_degrees(self):
        return np.array([len(J) for J in self.variables])

    def chk_degrees(self):
        return np.array([len(I) for I in self.checks])

    def __repr__(self):
        return f"TannerGraph(n_var={self.n_var}, n_chk={self.n_chk}, edges={self.n_edges})"


def _graph(g):
    return g if isinstance(g, TannerGraph) else TannerGraph(g)


@dataclass(frozen=True)
class ConstructionSpec:
    """Parameters of a matrix construction.

    ``m`` defaults to ``n * dv / dc``; it must be given explicitly only when
    that ratio is not an integer (irregular ensembles).
    """

    kind: str
    n: int
    dv: int = 3
    dc: int = 6
    seed: int = 0
    m: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown construction kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.kind != "dense_pm1" and self.dv < 2:
            raise ValueError("dv must be at least 2")
        if self.kind in ("gallager_regular", "girth_peg"):
            if (self.n * self.dv) % self.dc:
                raise ConstructionError(f"n*dv = {self.n * self.dv} is not divisible by dc = {self.dc}")
            if self.m is not None and self.m != self.rows:
                raise ConstructionError("m is implied by n*dv/dc for regular kinds")
        if self.kind == "gallager_regular" and self.n % self.dc:
            raise ConstructionError(f"gallager_regular needs dc | n (n={self.n}, dc={self.dc})")

    @property
    def rows(self):
        if self.m is not None:
            return int(self.m)
        if (self.n * self.dv) % self.dc:
            raise ConstructionError("m must be given when n*dv/dc is not an integer")
        return self.n * self.dv // self.dc


@dataclass
class ExpansionReport:
    dv: int
    gamma: Fraction
    delta: Fraction
    witness: tuple = None
    subsets_checked: int = 0

    @property
    def passed(self):
        return self.witness is None


def construct(spec):
    """Build the matrix described by ``spec`` (uint8, or int8 for dense_pm1)."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "gallager_regular":
        return _gallager(spec.n, spec.dv, spec.dc, rng)
    if spec.kind == "girth_peg":
        # with a hard cap on check degrees, late variables sometimes can only
        # close a 4-cycle; such draws are redone from the same stream
        # counting bound: each variable uses C(dv, 2) distinct check pairs
        attempts = _PEG_ATTEMPTS if spec.n * math.comb(spec.dv, 2) <= math.comb(spec.rows, 2) else 1
        for _ in range(attempts):
            H = _peg(spec.n, spec.rows, spec.dv, spec.dc, rng)
            if not _has_4cycle(H):
                break
        return H
    if spec.kind == "random_column_weight":
        m = spec.rows
        if spec.dv > m:
            raise ConstructionError(f"column weight {spec.dv} exceeds row count {m}")
        H = np.zeros((m, spec.n), dtype=np.uint8)
        for i in range(spec.n):
            H[rng.choice(m, spec.dv, replace=False), i] = 1
        return H
    m = spec.rows
    u = rng.random((m, spec.n))
    return np.where(u < 1 / 6, 1, np.where(u < 1 / 3, -1, 0)).astype(np.int8)


def _gallager(n, dv, dc, rng, max_sweeps=200):
    """Gallager's block form, with later blocks repaired to avoid 4-cycles.

    Block 1 puts ones at columns ``r*dc .. r*dc+dc-1`` of row ``r``. Block
    ``b > 1`` is a seeded column permutation of block 1; columns that would
    share two checks with another column are swapped into other rows of the
    same block until no such pair remains (or the sweep budget runs out, in
    which case the best assignment found is kept).
    """
    rows_per_block = n // dc
    # neighbours[c] = columns sharing a check with c in earlier blocks
    neighbours = [set() for _ in range(n)]
    groups_all = []
    first = [list(range(r * dc, (r + 1) * dc)) for r in range(rows_per_block)]
    groups_all.append(first)
    for grp in first:
        for c in grp:
            neighbours[c].update(x for x in grp if x != c)

    for _ in range(1, dv):
        perm = rng.permutation(n)
        groups = [list(perm[r * dc:(r + 1) * dc]) for r in range(rows_per_block)]
        where = np.empty(n, dtype=np.int64)
        for g, grp in enumerate(groups):
            for c in grp:
                where[c] = g

        def clashes(c, grp, skip=None):
            return sum(1 for x in grp if x != c and x != skip and x in neighbours[c])

        for _sweep in range(max_sweeps):
            bad = [c for c in range(n) if clashes(c, groups[where[c]])]
            if not bad:
                break
            for c in bad:
                g = where[c]
                if not clashes(c, groups[g]):
                    continue
                for c2 in rng.permutation(n):
                    g2 = where[c2]
                    if g2 == g:
                        continue
                    if clashes(c, groups[g2], skip=c2) or clashes(c2, groups[g], skip=c):
                        continue
                    groups[g][groups[g].index(c)] = c2
                    groups[g2][groups[g2].index(c2)] = c
                    where[c], where[c2] = g2, g
                    break
        for grp in groups:
            for c in grp:
                neighbours[c].update(x for x in grp if x != c)
        groups_all.append(groups)

    H = np.zeros((rows_per_block * dv, n), dtype=np.uint8)
    for b, groups in enumerate(groups_all):
        for r, grp in enumerate(groups):
            H[b * rows_per_block + r, grp] = 1
    return H


def _has_4cycle(H):
    A = H.astype(np.int64)
    G = A @ A.T
    np.fill_diagonal(G, 0)
    return bool((G > 1).any())


def _peg(n, m, dv, dc, rng):
    """Progressive edge growth, restricted to checks that still have room."""
    chk_nbrs = [[] for _ in range(m)]
    var_nbrs = [[] for _ in range(n)]
    for v in range(n):
        for k in range(dv):
            deg = np.array([len(x) for x in chk_nbrs])
            open_chk = deg < dc
            open_chk[var_nbrs[v]] = False
            if not open_chk.any():
                raise ConstructionError("progressive edge growth ran out of check slots")
            if k == 0:
                cand = np.flatnonzero(open_chk)
            else:
                cand = _peg_far_checks(v, var_nbrs, chk_nbrs, m, open_chk)
            low = deg[cand].min()
            cand = cand[deg[cand] == low]
            c = int(rng.choice(cand))
            chk_nbrs[c].append(v)
            var_nbrs[v].append(c)
    H = np.zeros((m, n), dtype=np.uint8)
    for c, vs in enumerate(chk_nbrs):
        H[c, vs] = 1
    return H


def _peg_far_checks(v, var_nbrs, chk_nbrs, m, open_chk):
    """Open checks farthest from ``v`` in the current graph.

    The tree below ``v`` is grown one layer at a time. If it stops growing,
    any open check outside it is unreachable and therefore preferred;
    otherwise the open checks first reached in the final layer are returned.
    """
    reached = np.zeros(m, dtype=bool)
    reached[var_nbrs[v]] = True
    frontier = list(var_nbrs[v])
    seen_var = {v}
    while True:
        nxt = []
        for c in frontier:
            for u in chk_nbrs[c]:
                if u in seen_var:
                    continue
                seen_var.add(u)
                for c2 in var_nbrs[u]:
                    if not reached[c2]:
                        nxt.append(c2)
        nxt = sorted(set(nxt))
        outside = np.flatnonzero(open_chk & ~reached)
        if not nxt:
            return outside
        grown = reached.copy()
        grown[nxt] = True
        if not (open_chk & ~grown).any():
            return outside
        reached, frontier = grown, nxt


def girth(g):
    """Length of the shortest cycle, by breadth-first search from every node.

    Returns :data:`GIRTH_INFINITE` for forests.
    """
    g = _graph(g)
    nv = g.n_var
    # nodes 0..nv-1 are variables, nv.. are checks
    adj = [list(nv + J) for J in g.variables] + [list(I) for I in g.checks]
    best = GIRTH_INFINITE
    for root in range(len(adj)):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def girth_nonbacktracking(g, max_length=None):
    """Girth from the non-backtracking (Hashimoto) edge matrix.

    ``trace(B**l)`` counts closed non-backtracking walks of length ``l``; the
    smallest ``l`` with a positive trace is the girth. This shares no code
    with the breadth-first search in :func:`girth`.
    """
    g = _graph(g)
    nv = g.n_var
    arcs = []
    for i, J in enumerate(g.variables):
        for j in J:
            arcs.append((i, nv + int(j)))
            arcs.append((nv + int(j), i))
    if not arcs:
        return GIRTH_INFINITE
    index = {a: t for t, a in enumerate(arcs)}
    out_arcs = {}
    for t, (u, w) in enumerate(arcs):
        out_arcs.setdefault(u, []).append(t)
    rows, cols = [], []
    for t, (u, w) in enumerate(arcs):
        for t2 in out_arcs.get(w, []):
            if arcs[t2][1] != u:
                rows.append(t)
                cols.append(t2)
    E = len(arcs)
    B = sp.csr_matrix((np.ones(len(rows), dtype=np.float64), (rows, cols)), shape=(E, E))
    if max_length is None:
        max_length = 2 * (nv + g.n_chk)
    P = B.copy()
    for length in range(2, max_length + 1):
        P = P @ B
        P.data = np.minimum(P.data, 1.0)  # only reachability matters
        P.eliminate_zeros()
        if P.diagonal().sum() > 0:
            return length
        if P.nnz == 0:
            break
    return GIRTH_INFINITE


def check_expansion(g, gamma, delta, cap=1 << 20):
    """Exhaustively test the (dv, gamma, delta) vertex-expansion property.

    Every nonempty set ``S`` of at most ``gamma * n`` variable nodes must have
    ``|N(S)| >= delta * dv * |S|``. The first failing set (in size, then
    lexicographic order) is returned as the witness.
    """
    g = _graph(g)
    degs = g.var_degrees()
    if degs.min() != degs.max():
        raise ValueError("expansion is defined for left-regular graphs only")
    dv = int(degs[0])
    gamma, delta = Fraction(gamma), Fraction(delta)
    smax = math.floor(gamma * g.n_var)
    total = sum(math.comb(g.n_var, s) for s in range(1, smax + 1))
    if total > cap:
        raise CapExceeded(f"{total} subsets exceed cap {cap}")
    masks = [sum(1 << int(j) for j in J) for J in g.variables]
    checked = 0
    for size in range(1, smax + 1):
        need = delta * dv * size
        for S in combinations(range(g.n_var), size):
            checked += 1
            acc = 0
            for i in S:
                acc |= masks[i]
            if bin(acc).count("1") < need:
                return ExpansionReport(dv, gamma, delta, S, checked)
    return ExpansionReport(dv, gamma, delta, None, checked)


def neighbourhood_size(g, S):
    g = _graph(g)
    found = set()
    for i in S:
        found.update(int(j) for j in g.variables[i])
    return len(found)


def corollary1_k_bound(dv, gamma, delta, n):
    """Sparsity level recoverable from a (dv, gamma, delta)-expander.

    Requires ``delta > 2/3 + 1/(3 dv)`` and ``delta * dv`` a positive integer.
    """
    d = Fraction(delta)
    if not d > Fraction(2, 3) + Fraction(1, 3 * dv):
        raise ExpansionTooWeak(f"delta={delta} does not exceed 2/3 + 1/(3*{dv})")
    prod = d * dv
    if prod.denominator != 1 or prod <= 0:
        raise ExpansionTooWeak(f"delta*dv = {prod} is not a positive integer")
    ratio = (3 * d - 2) / (2 * d - 1)
    return float(ratio) * (float(gamma) * n - 1)


def write_alist(path, H):
    """Write the support of ``H`` in alist format to a path or text stream."""
    A = (np.asarray(H) != 0).astype(np.uint8)
    m, n = A.shape
    cols = [np.flatnonzero(A[:, i]) + 1 for i in range(n)]
    rows = [np.flatnonzero(A[j]) + 1 for j in range(m)]
    max_c = max((len(c) for c in cols), default=0)
    max_r = max((len(r) for r in rows), default=0)

    def padded(idx, width):
        vals = list(idx) + [0] * (width - len(idx))
        return " ".join(str(int(v)) for v in vals)

    lines = [f"{n} {m}", f"{max_c} {max_r}",
             " ".join(str(len(c)) for c in cols),
             " ".join(str(len(r)) for r in rows)]
    lines += [padded(c, max_c) for c in cols]
    lines += [padded(r, max_r) for r in rows]
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def read_alist(path):
    with open(path) as fh:
        lines = [ln.split() for ln in fh.read().splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        ints = [[int(tok) for tok in ln] for ln in lines]
    except ValueError as exc:
        raise AlistParseError(f"non-integer token: {exc}") from None
    if len(ints) < 4 or len(ints[0]) != 2 or len(ints[1]) != 2:
        raise AlistParseError("header must be 'n m' followed by 'max_col_deg max_row_deg'")
    n, m = ints[0]
    max_c, max_r = ints[1]
    if n < 1 or m < 1:
        raise AlistParseError("dimensions must be positive")
    col_deg, row_deg = ints[2], ints[3]
    if len(col_deg) != n or len(row_deg) != m:
        raise AlistParseError("degree lists do not match the dimensions")
    if max(col_deg) > max_c or max(row_deg) > max_r:
        raise AlistParseError("a degree exceeds the declared maximum")
    if len(ints) != 4 + n + m:
        raise AlistParseError(f"expected {4 + n + m} lines, found {len(ints)}")
    H = np.zeros((m, n), dtype=np.uint8)
    for i, ln in enumerate(ints[4:4 + n]):
        _check_padding(ln, col_deg[i], max_c, m, f"column {i + 1}")
        H[np.array(ln[:col_deg[i]], dtype=np.int64) - 1, i] = 1
    for j, ln in enumerate(ints[4 + n:]):
        _check_padding(ln, row_deg[j], max_r, n, f"row {j + 1}")
        expect = set(np.flatnonzero(H[j]) + 1)
        if set(ln[:row_deg[j]]) != expect:
            raise AlistParseError(f"row {j + 1} disagrees with the column lists")
    return H


def _check_padding(ln, deg, width, bound, what):
    if len(ln) != width:
        raise AlistParseError(f"{what}: expected {width} entries, found {len(ln)}")
    idx, pad = ln[:deg], ln[deg:]
    if any(v < 1 or v > bound for v in idx) or len(set(idx)) != deg:
        raise AlistParseError(f"{what}: invalid or repeated index")
    if any(v != 0 for v in pad):
        raise AlistParseError(f"{what}: padding must be zeros")


def hamming_matrix(r=3):
    """Parity-check matrix whose column c (1-based) is c in binary, LSB in row 1."""
    n = (1 << r) - 1
    cols = np.arange(1, n + 1)
    return np.array([(cols >> b) & 1 for b in range(r)], dtype=np.uint8)


def chain_matrix(m=3):
    """The m x (m+1) path matrix with ones at (j, j) and (j, j+1)."""
    H = np.zeros((m, m + 1), dtype=np.uint8)
    for j in range(m):
        H[j, j] = H[j, j + 1] = 1
    return H
