"""Dense two-phase simplex solver.

The solver operates on a full tableau, which is the simplest correct choice at
the problem sizes produced by the constrained l1 estimators (a few hundred
variables and rows).  Pivot selection is most-negative reduced cost with
lowest-index tie-breaking; when the objective stalls on degenerate pivots the
solver switches to Bland's rule, which guarantees termination.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LpIterationLimit

LE, GE, EQ = "<=", ">=", "="

_FEAS_TOL = 1e-9
_OPT_TOL = 1e-9
_PIV_TOL = 1e-10


@dataclass(frozen=True)
class LpProblem:
    """min objective @ x subject to row @ x (rel) rhs and box bounds.

    Bounds use -inf/+inf for unbounded sides.
    """

    num_vars: int
    objective: np.ndarray
    constraints: list = field(default_factory=list)  # (row, relation, rhs)
    var_bounds: list = field(default_factory=list)  # (lower, upper)

    def validate(self):
        if len(np.asarray(self.objective).ravel()) != self.num_vars:
            raise DimensionMismatch("objective length != num_vars")
        for row, rel, _ in self.constraints:
            if len(np.asarray(row).ravel()) != self.num_vars:
                raise DimensionMismatch("constraint row length != num_vars")
            if rel not in (LE, GE, EQ):
                raise DimensionMismatch(f"unknown relation {rel!r}")
        if len(self.var_bounds) != self.num_vars:
            raise DimensionMismatch("var_bounds length != num_vars")
        for lo, hi in self.var_bounds:
            if lo > hi:
                raise DimensionMismatch("lower bound exceeds upper bound")


@dataclass
class LpSolution:
    status: str  # 'optimal' | 'infeasible' | 'unbounded'
    x: np.ndarray = None
    objective_value: float = None


def _pivot(T, basis, r, j):
    piv_row = T[r] / T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, piv_row)
    T[r] = piv_row
    basis[r] = j


def _choose_entering(zrow, allowed, bland):
    cand = np.where(allowed & (zrow[:-1] < -_OPT_TOL))[0]
    if cand.size == 0:
        return -1
    if bland:
        return int(cand[0])
    return int(cand[np.argmin(zrow[cand])])


def _choose_leaving(T, basis, j, m):
    col = T[:m, j]
    rhs = T[:m, -1]
    pos = col > _PIV_TOL
    if not np.any(pos):
        return -1
    ratios = np.full(m, np.inf)
    ratios[pos] = rhs[pos] / col[pos]
    best = np.min(ratios)
    ties = np.where(ratios <= best + 1e-12)[0]
    if ties.size == 1:
        return int(ties[0])
    # lowest basis index among ties keeps the path deterministic and cycle-safe
    return int(ties[np.argmin(np.asarray(basis)[ties])])


def _run_simplex(T, basis, m, allowed, iter_budget):
    """Iterate to optimality on the current objective row. Returns status."""
    stall = 0
    bland = False
    it = 0
    while True:
        j = _choose_entering(T[m], allowed, bland)
        if j < 0:
            return "optimal", it
        r = _choose_leaving(T, basis, j, m)
        if r < 0:
            return "unbounded", it
        before = T[m, -1]
        _pivot(T, basis, r, j)
        it += 1
        if it > iter_budget:
            raise LpIterationLimit(f"pivot budget {iter_budget} exhausted")
        # T[m, -1] holds minus the objective; improvement raises it.
        if T[m, -1] < before + 1e-12:
            stall += 1
            if stall > 2 * m + 20:
                bland = True
        else:
            stall = 0
            bland = False


def solve_lp(problem, max_iters=None):
    """Solve the LP, returning an LpSolution with a vertex optimum.

    Raises LpIterationLimit when the pivot budget runs out, which is reported
    distinctly from infeasibility.
    """
    problem.validate()
    n = problem.num_vars
    c = np.asarray(problem.objective, dtype=float).ravel()

    # Map original variables to nonnegative standard-form variables.
    # x_j = off_j + sum_k scale * u_k for one or two standard columns.
    col_of = []  # per original var: list of (std_col, scale)
    offsets = np.zeros(n)
    extra_rows = []  # upper-bound rows in standard vars: (std_col, ub)
    nstd = 0
    for j, (lo, hi) in enumerate(problem.var_bounds):
        lo, hi = float(lo), float(hi)
        if math.isinf(lo) and math.isinf(hi):
            col_of.append([(nstd, 1.0), (nstd + 1, -1.0)])
            nstd += 2
        elif not math.isinf(lo):
            offsets[j] = lo
            col_of.append([(nstd, 1.0)])
            if not math.isinf(hi):
                extra_rows.append((nstd, hi - lo))
            nstd += 1
        else:  # lo = -inf, hi finite: x = hi - u
            offsets[j] = hi
            col_of.append([(nstd, -1.0)])
            nstd += 1

    # Assemble all constraints as A u <= b in standard variables.
    rows = []
    rhs = []

    def add_le(coef, b):
        a = np.zeros(nstd)
        for j in range(n):
            if coef[j] != 0.0:
                for k, s in col_of[j]:
                    a[k] += s * coef[j]
        rows.append(a)
        rhs.append(b - float(np.dot(coef, offsets)))

    for row, rel, b in problem.constraints:
        row = np.asarray(row, dtype=float).ravel()
        if rel in (LE, EQ):
            add_le(row, float(b))
        if rel in (GE, EQ):
            add_le(-row, -float(b))
    for k, ub in extra_rows:
        a = np.zeros(nstd)
        a[k] = 1.0
        rows.append(a)
        rhs.append(ub)

    m = len(rows)
    A = np.array(rows) if m else np.zeros((0, nstd))
    b = np.array(rhs)

    # Row equilibration keeps tolerances meaningful across scales.
    if m:
        scale = np.maximum(np.max(np.abs(A), axis=1), np.abs(b))
        scale[scale == 0] = 1.0
        A /= scale[:, None]
        b /= scale

    # Slack per row; rows with negative rhs are negated and get an artificial.
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    slack_sign = np.where(neg, -1.0, 1.0)
    art_rows = np.where(neg)[0]
    n_art = art_rows.size

    ncols = nstd + m + n_art + 1
    T = np.zeros((m + 1, ncols))
    T[:m, :nstd] = A
    T[np.arange(m), nstd + np.arange(m)] = slack_sign
    T[art_rows, nstd + m + np.arange(n_art)] = 1.0
    T[:m, -1] = b

    basis = [0] * m
    for i in range(m):
        basis[i] = nstd + i
    for k, i in enumerate(art_rows):
        basis[i] = nstd + m + k

    if max_iters is None:
        max_iters = max(50 * (n + len(problem.constraints)), 1000)

    allowed = np.ones(ncols - 1, dtype=bool)
    budget = max_iters

    if n_art:
        # Phase 1: minimize the sum of artificials.
        T[m] = 0.0
        for i in art_rows:
            T[m] -= T[i]
        T[m, nstd + m:-1] += 1.0
        status, used = _run_simplex(T, basis, m, allowed, budget)
        budget -= used
        if status != "optimal" or -T[m, -1] > 1e-7:
            return LpSolution(status="infeasible")
        # Drive remaining artificials out of the basis.
        art_start = nstd + m
        for i in range(m):
            if basis[i] >= art_start:
                nz = np.where(np.abs(T[i, :art_start]) > _PIV_TOL)[0]
                if nz.size:
                    _pivot(T, basis, i, int(nz[0]))
        allowed[art_start:] = False

    # Phase 2 objective row: reduced costs of the standard-form objective.
    cstd = np.zeros(ncols - 1)
    for j in range(n):
        for k, s in col_of[j]:
            cstd[k] += s * c[j]
    zrow = np.zeros(ncols)
    zrow[:-1] = cstd
    zrow[-1] = -float(np.dot(c, offsets))
    for i in range(m):
        cb = cstd[basis[i]]
        if cb != 0.0:
            zrow -= cb * T[i]
    T[m] = zrow

    status, _ = _run_simplex(T, basis, m, allowed, budget)
    if status == "unbounded":
        return LpSolution(status="unbounded")

    u = np.zeros(ncols - 1)
    for i in range(m):
        u[basis[i]] = T[i, -1]
    x = offsets.copy()
    for j in range(n):
        for k, s in col_of[j]:
            x[j] += s * u[k]
    return LpSolution(status="optimal", x=x, objective_value=float(np.dot(c, x)))
