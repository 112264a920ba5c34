"""Dense two-phase simplex with Bland's anti-cycling rule.

Two arithmetic modes share one code path:

* ``"float"`` works on a float64 tableau with pivot tolerance ``TOL_PIV`` and
  feasibility tolerance ``TOL_FEAS``.
* ``"rational"`` works on an object tableau of :class:`fractions.Fraction`
  and returns exact vertices; floats in the input are converted exactly.

Problems are stated as ``min c.x  s.t.  A x = b,  A_ub x <= b_ub,  lo <= x <= hi``
and reduced internally to standard form ``min c.y  s.t.  A' y = b',  y >= 0``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
import scipy.linalg
from scipy.linalg.blas import dger

from .errors import InfeasibleError

__all__ = ["LpProblem", "LpSolution", "solve", "minimize_l1", "TOL_PIV", "TOL_FEAS"]

TOL_PIV = 1e-9
TOL_FEAS = 1e-8
_ZERO_SNAP = 1e-11
# float tableaus are rebuilt from the original data every this many pivots
_REFRESH = 200
# pivots without objective progress before the Dantzig rule reacts to a stall
_STALL = 50

@dataclass
class LpProblem:
    """Linear program ``min c.x`` subject to equality, inequality and bound constraints.

    ``bounds`` is a list of ``(lower, upper)`` pairs, one per variable; ``None``
    means ``(0, inf)`` for every variable. Use ``-math.inf`` / ``math.inf`` for
    missing bounds.
    """

    c: object
    A: object = None
    b: object = None
    bounds: list = None
    A_ub: object = None
    b_ub: object = None

    def __post_init__(self):
        n = len(self.c)
        if self.bounds is None:
            self.bounds = [(0, math.inf)] * n
        if len(self.bounds) != n:
            raise ValueError("one (lower, upper) pair per variable required")
        for lo, hi in self.bounds:
            if lo > hi:
                raise ValueError(f"lower bound {lo} exceeds upper bound {hi}")
        for mat, rhs, name in ((self.A, self.b, "A"), (self.A_ub, self.b_ub, "A_ub")):
            if mat is None:
                continue
            shape = np.shape(mat)
            if len(shape) != 2 or shape[1] != n or len(rhs) != shape[0]:
                raise ValueError(f"{name} has inconsistent dimensions")

    @property
    def n_vars(self):
        return len(self.c)


@dataclass
class LpSolution:
    status: str
    x: np.ndarray = None
    objective_value: object = None
    iterations: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def optimal(self):
        return self.status == "optimal"


def _as_number(v, mode):
    if mode == "rational":
        if isinstance(v, Fraction):
            return v
        if isinstance(v, (int, np.integer)):
            return Fraction(int(v))
        return Fraction(float(v))
    return float(v)


def _matrix(M, rows, cols, mode):
    dtype = object if mode == "rational" else np.float64
    out = np.zeros((rows, cols), dtype=dtype)
    if mode == "rational":
        out[...] = Fraction(0)
    if M is not None and rows:
        if mode == "rational":
            src = np.asarray(M, dtype=object)
            for idx, v in np.ndenumerate(src):
                out[idx] = _as_number(v, mode)
        else:
            out[...] = np.asarray(M, dtype=np.float64)
    return out


def _standard_form(p, mode):
    """Rewrite ``p`` as ``min c.y, A y = b, y >= 0``.

    Returns the standard-form data plus the affine map back to the original
    variables: ``x = offset + T y``.
    """
    zero = Fraction(0) if mode == "rational" else 0.0
    one = Fraction(1) if mode == "rational" else 1.0
    n = p.n_vars
    m_eq = 0 if p.A is None else np.shape(p.A)[0]
    m_ub = 0 if p.A_ub is None else np.shape(p.A_ub)[0]
    A_eq = _matrix(p.A, m_eq, n, mode)
    A_ub = _matrix(p.A_ub, m_ub, n, mode)
    b_eq = [_as_number(v, mode) for v in (p.b if m_eq else [])]
    b_ub = [_as_number(v, mode) for v in (p.b_ub if m_ub else [])]
    c = [_as_number(v, mode) for v in p.c]

    # each original variable becomes offset + sum(coef * y_col)
    columns = []  # list of (orig_index, coef)
    offsets = [zero] * n
    upper_rows = []  # (std column, width)
    for j, (lo, hi) in enumerate(p.bounds):
        if lo > -math.inf:
            offsets[j] = _as_number(lo, mode)
            columns.append((j, one))
            if hi < math.inf:
                upper_rows.append((len(columns) - 1, _as_number(hi, mode) - offsets[j]))
        elif hi < math.inf:
            offsets[j] = _as_number(hi, mode)
            columns.append((j, -one))
        else:
            columns.append((j, one))
            columns.append((j, -one))

    n_struct = len(columns)
    n_slack = m_ub + len(upper_rows)
    N = n_struct + n_slack
    R = m_eq + m_ub + len(upper_rows)
    dtype = object if mode == "rational" else np.float64
    A = np.zeros((R, N), dtype=dtype)
    if mode == "rational":
        A[...] = zero
    b = [zero] * R
    cost = [zero] * N
    const = sum((c[j] * offsets[j] for j in range(n)), zero)

    for k, (j, coef) in enumerate(columns):
        cost[k] = c[j] * coef
        if m_eq:
            A[:m_eq, k] = A_eq[:, j] * coef
        if m_ub:
            A[m_eq:m_eq + m_ub, k] = A_ub[:, j] * coef
    for r in range(m_eq):
        b[r] = b_eq[r] - sum((A_eq[r, j] * offsets[j] for j in range(n)), zero)
    for r in range(m_ub):
        b[m_eq + r] = b_ub[r] - sum((A_ub[r, j] * offsets[j] for j in range(n)), zero)
        A[m_eq + r, n_struct + r] = one
    for t, (k, width) in enumerate(upper_rows):
        r = m_eq + m_ub + t
        A[r, k] = one
        A[r, n_struct + m_ub + t] = one
        b[r] = width
    return A, np.array(b, dtype=dtype), np.array(cost, dtype=dtype), const, columns, offsets


class _Tableau:
    def __init__(self, A, b, mode, rule):
        self.mode = mode
        self.rule = rule
        self.exact = mode == "rational"
        self.tol = 0 if self.exact else TOL_PIV
        R, N = A.shape
        A = A.copy()
        b = b.copy()
        neg = [r for r in range(R) if b[r] < 0]
        A[neg] = -A[neg]
        b[neg] = -b[neg]
        basis = [-1] * R
        for col in range(N):
            nz = [r for r in range(R) if A[r, col] != 0]
            if len(nz) == 1 and A[nz[0], col] == 1 and basis[nz[0]] < 0:
                basis[nz[0]] = col
        art_rows = [r for r in range(R) if basis[r] < 0]
        self.n_struct = N
        self.n_art = len(art_rows)
        dtype = A.dtype
        T = np.zeros((R + 1, N + self.n_art + 1), dtype=dtype)
        if self.exact:
            T[...] = Fraction(0)
        T[:R, :N] = A
        T[:R, -1] = b
        for t, r in enumerate(art_rows):
            T[r, N + t] = 1 if not self.exact else Fraction(1)
            basis[r] = N + t
        self.T = T
        self.basis = basis
        self.source = T[:R].copy()
        self.live_rows = list(range(R))
        self.cost = None
        self.shift = None
        self.iterations = 0

    @property
    def rows(self):
        return self.T.shape[0] - 1

    def set_objective(self, cost):
        """Load reduced costs for ``cost`` (indexed over current columns)."""
        T = self.T
        R = self.rows
        cost = np.asarray(cost, dtype=T.dtype)
        self.cost = cost
        d = np.zeros(T.shape[1], dtype=T.dtype)
        if self.exact:
            d[...] = Fraction(0)
        d[: len(cost)] = cost
        cb = np.array([cost[j] for j in self.basis], dtype=T.dtype)
        if R:
            d = d - cb @ T[:R, :]
        T[-1, :] = d

    def pivot(self, r, j):
        T = self.T
        if self.exact:
            row = T[r] / T[r, j]
            col = T[:, j].copy()
            T -= np.outer(col, row)
            T[r] = row
        else:
            row = T[r] / T[r, j]
            col = T[:, j].copy()
            col[r] = 0.0
            T[r] = row
            # in-place rank-one update; T is C-ordered so T.T is Fortran-ordered
            out = dger(-1.0, row, col, a=T.T, overwrite_a=1)
            if not np.shares_memory(out, T):
                self.T = T = np.ascontiguousarray(out.T)
            T[:, j] = 0.0
            T[r, j] = 1.0
            # snap round-off on the right-hand side so degenerate rows stay
            # exactly tied in the ratio test (otherwise Bland's rule can cycle)
            rhs = T[:, -1]
            rhs[np.abs(rhs) < _ZERO_SNAP] = 0.0
        self.basis[r] = j
        self.iterations += 1
        if not self.exact and self.iterations % _REFRESH == 0:
            self.refresh()

    def drop_artificials(self):
        """Remove the artificial columns once none of them is basic."""
        N = self.n_struct
        keep = list(range(N)) + [self.T.shape[1] - 1]
        self.T = np.ascontiguousarray(self.T[:, keep])
        self.source = np.ascontiguousarray(self.source[:, keep])
        self.n_art = 0

    def refresh(self):
        """Recompute the float tableau from the original rows and current basis."""
        src = self.source[self.live_rows]
        B = src[:, self.basis]
        try:
            body = np.linalg.solve(B, src)
        except np.linalg.LinAlgError:
            return
        body[np.abs(body) < 1e-14] = 0.0
        rhs = body[:, -1]
        rhs[np.abs(rhs) < _ZERO_SNAP] = 0.0
        for i, j in enumerate(self.basis):
            body[:, j] = 0.0
            body[i, j] = 1.0
        self.T[:-1] = body
        if self.cost is not None:
            self.set_objective(self.cost)

    def _entering(self, ncols, bland):
        d = self.T[-1, :ncols]
        if self.exact:
            cand = [j for j in range(ncols) if d[j] < 0]
            if not cand:
                return None
            if bland:
                return cand[0]
            return min(cand, key=lambda j: (d[j], j))
        neg = np.flatnonzero(d < -self.tol)
        if neg.size == 0:
            return None
        if bland:
            return int(neg[0])
        return int(neg[np.argmin(d[neg])])

    def _leaving(self, j, bland):
        T = self.T
        R = self.rows
        colj = T[:R, j]
        rhs = T[:R, -1]
        if self.exact:
            pos = [i for i in range(R) if colj[i] > 0]
            if not pos:
                return None
            rmin = min(rhs[i] / colj[i] for i in pos)
            ties = [i for i in pos if rhs[i] / colj[i] == rmin]
            if bland:
                return min(ties, key=lambda i: self.basis[i])
            return max(ties, key=lambda i: (colj[i], -self.basis[i]))
        pos = np.flatnonzero(colj > self.tol)
        if pos.size == 0:
            return None
        ratios = np.maximum(rhs[pos], 0.0) / colj[pos]
        rmin = ratios.min()
        ties = pos[ratios <= rmin + 1e-12 * (1.0 + abs(rmin))]
        if ties.size == 1:
            return int(ties[0])
        if bland:
            return int(min(ties.tolist(), key=lambda i: self.basis[i]))
        # largest pivot element: the numerically safest choice
        return int(ties[np.argmax(colj[ties])])

    def run(self, ncols, max_iter, perturb=False):
        """Pivot to optimality; returns "optimal" or "unbounded".

        Under the Dantzig rule a run of ``_STALL`` pivots without progress in
        the objective is broken by perturbing the right-hand side (float
        mode, when ``perturb`` is set) or by switching to Bland's rule until
        the objective moves. Callers must :meth:`unperturb` afterwards.
        """
        always_bland = self.rule == "bland"
        stall = 0
        while True:
            if self.iterations >= max_iter:
                raise RuntimeError(f"simplex exceeded {max_iter} iterations")
            if stall >= _STALL and perturb and not self.exact and self.shift is None:
                self.perturb()
                stall = 0
            bland = always_bland or stall >= _STALL
            j = self._entering(ncols, bland)
            if j is None:
                return "optimal"
            r = self._leaving(j, bland)
            if r is None:
                return "unbounded"
            before = self.T[-1, -1]
            self.pivot(r, j)
            if self.exact:
                moved = self.T[-1, -1] != before
            else:
                moved = abs(self.T[-1, -1] - before) > 1e-9 * (1.0 + abs(before))
            stall = 0 if moved else stall + 1

    def perturb(self):
        """Shift every basic value up by a small random amount.

        The shift is written into the source right-hand side as ``B @ delta``
        so that reinversion keeps it.
        """
        rng = np.random.default_rng(len(self.basis))
        R = self.rows
        scale = 1.0 + np.abs(self.T[:R, -1]).max(initial=0.0)
        delta = rng.uniform(1e-7, 2e-7, size=R) * scale
        B = self.source[self.live_rows][:, self.basis]
        self.shift = B @ delta
        self.source[self.live_rows, -1] += self.shift
        self.T[:R, -1] += delta
        self.T[-1, -1] -= np.dot(self.cost[self.basis], delta)

    def unperturb(self, max_iter):
        """Remove the perturbation and restore primal feasibility by dual simplex."""
        if self.shift is None:
            return True
        self.source[self.live_rows, -1] -= self.shift
        self.shift = None
        self.refresh()
        T = self.T
        R = self.rows
        ncols = T.shape[1] - 1
        while True:
            rhs = T[:R, -1]
            r = int(np.argmin(rhs)) if R else 0
            if not R or rhs[r] >= -TOL_FEAS:
                rhs[rhs < 0] = 0.0
                return True
            if self.iterations >= max_iter:
                raise RuntimeError(f"simplex exceeded {max_iter} iterations")
            row = T[r, :ncols]
            cand = np.flatnonzero(row < -self.tol)
            if cand.size == 0:
                return False
            ratios = np.maximum(T[-1, cand], 0.0) / -row[cand]
            self.pivot(r, int(cand[np.argmin(ratios)]))
            T = self.T


def _apply_crash(tab, crash):
    """Pivot a caller-proposed basis into the artificial rows.

    ``crash`` lists ``(column, mirror)`` pairs of standard-form columns, where
    ``mirror`` is the negated column (or ``None``). A basic column with a
    negative value is swapped for its mirror. Returns False, leaving the
    tableau in an unspecified state, when the result is not primal feasible.
    """
    N = tab.n_struct
    mirrors = {}
    for col, mirror in crash:
        free_rows = [i for i in range(tab.rows) if tab.basis[i] >= N]
        if not free_rows:
            break
        vals = [abs(tab.T[i, col]) for i in free_rows]
        best = max(range(len(free_rows)), key=lambda t: vals[t])
        if vals[best] <= tab.tol:
            continue
        tab.pivot(free_rows[best], col)
        if mirror is not None:
            mirrors[col] = mirror
    for i in range(tab.rows):
        j = tab.basis[i]
        if tab.T[i, -1] < 0 and j in mirrors:
            tab.pivot(i, mirrors[j])
    rhs = tab.T[:-1, -1]
    return bool(np.all(rhs >= (0 if tab.exact else -TOL_FEAS)))


def solve(p, mode="float", rule="bland", max_iter=None, crash=None):
    """Solve ``p`` to an optimal basic solution.

    ``rule="bland"`` uses the lowest-index entering variable and lowest-index
    tie-break in the ratio test. ``rule="dantzig"`` picks the most negative
    reduced cost and the largest pivot among ratio ties. When the objective
    stalls it falls back to Bland's rule (phase 1, rational mode) or, in
    phase 2 of float mode, perturbs the right-hand side and cleans up with
    dual simplex pivots at the end. It is much faster on large degenerate
    problems such as basis pursuit with sparse signals.

    ``crash`` optionally proposes a starting basis as ``(column, mirror)``
    pairs over the standard-form columns (see :func:`minimize_l1`). It only
    shortens phase 1; an unusable proposal is discarded.
    """
    if mode not in ("float", "rational"):
        raise ValueError(f"unknown mode {mode!r}")
    if rule not in ("bland", "dantzig"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    A, b, cost, const, columns, offsets = _standard_form(p, mode)
    R, N = A.shape
    if max_iter is None:
        max_iter = 50 * (R + N) + 1000
    tab = _Tableau(A, b, mode, rule)
    if crash and tab.n_art and not _apply_crash(tab, crash):
        tab = _Tableau(A, b, mode, rule)

    if tab.n_art:
        phase1 = [0] * N + [1] * tab.n_art
        tab.set_objective(np.array([_as_number(v, mode) for v in phase1], dtype=A.dtype))
        tab.run(N + tab.n_art, max_iter)
        infeas = -tab.T[-1, -1]
        if (infeas > 0) if tab.exact else (infeas > TOL_FEAS):
            return LpSolution("infeasible", iterations=tab.iterations)
        _drive_out_artificials(tab)
        tab.drop_artificials()
    zero = Fraction(0) if tab.exact else 0.0
    tab.set_objective(cost)
    status = tab.run(N, max_iter, perturb=rule == "dantzig")
    if status == "optimal" and not tab.unperturb(max_iter):
        raise RuntimeError("lost primal feasibility while removing the perturbation")
    if status == "unbounded":
        return LpSolution("unbounded", iterations=tab.iterations)

    y = [zero] * N
    for i, j in enumerate(tab.basis):
        if j < N:
            y[j] = tab.T[i, -1]
    x = list(offsets)
    for k, (j, coef) in enumerate(columns):
        x[j] = x[j] + coef * y[k]
    if tab.exact:
        x_arr = np.array(x, dtype=object)
        value = sum((_as_number(ci, mode) * xi for ci, xi in zip(p.c, x)), Fraction(0))
    else:
        x_arr = np.array(x, dtype=np.float64)
        value = float(np.dot(np.asarray(p.c, dtype=np.float64), x_arr))
    return LpSolution("optimal", x_arr, value, tab.iterations)


def _drive_out_artificials(tab):
    """Pivot basic artificials out after phase 1; drop rows that are redundant."""
    N = tab.n_struct
    drop = []
    for i in range(tab.rows):
        if tab.basis[i] < N:
            continue
        row = tab.T[i, :N]
        if tab.exact:
            nz = [j for j in range(N) if row[j] != 0]
        else:
            nz = np.flatnonzero(np.abs(row) > TOL_PIV).tolist()
        if nz:
            tab.pivot(i, nz[0])
        else:
            drop.append(i)
    if drop:
        keep = [i for i in range(tab.rows) if i not in set(drop)]
        tab.T = np.delete(tab.T, drop, axis=0)
        tab.basis = [tab.basis[i] for i in keep]
        tab.live_rows = [tab.live_rows[i] for i in keep]


def _l1_crash(A, n):
    """Independent columns of ``A`` (pivoted QR), paired with their mirrors."""
    Af = np.asarray(A, dtype=np.float64)
    if Af.shape[0] == 0:
        return None
    _, Rq, perm = scipy.linalg.qr(Af, mode="economic", pivoting=True)
    diag = np.abs(np.diag(Rq))
    rank = int(np.sum(diag > 1e-9 * max(1.0, diag[0] if diag.size else 0.0)))
    return [(int(j), int(j) + n) for j in perm[:rank]]


def minimize_l1(A, b, mode="float", rule="bland"):
    """Basis pursuit: the minimum-l1-norm solution of ``A x = b``.

    Returns ``(x, value)``. Raises :class:`InfeasibleError` when ``A x = b``
    has no solution.
    """
    A = np.asarray(A, dtype=object if mode == "rational" else np.float64)
    if A.ndim != 2 or A.shape[1] < 1:
        raise ValueError("A must be a 2-d matrix with at least one column")
    m, n = A.shape
    b = list(np.asarray(b, dtype=object).reshape(-1))
    if len(b) != m:
        raise ValueError("b length must match the row count of A")
    split = np.concatenate([A, -A], axis=1)
    one = Fraction(1) if mode == "rational" else 1.0
    prob = LpProblem(c=[one] * (2 * n), A=split, b=b)
    sol = solve(prob, mode=mode, rule=rule, crash=_l1_crash(A, n))
    if sol.status != "optimal":
        raise InfeasibleError("A x = b has no solution")
    x = sol.x[:n] - sol.x[n:]
    return x, sol.objective_value
