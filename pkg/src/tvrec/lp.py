"""Dense two-phase simplex solver.

Small exact LP oracle used by the TV equality solver, the dual-certificate
search, and the nullspace-property enumeration. Dense tableau arithmetic with
Bland's anti-cycling rule; intended scale is a few hundred variables after
standard-form conversion, which covers every oracle duty in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"


@dataclass
class LpProblem:
    """minimize c @ x  s.t.  a_eq @ x == b_eq,  a_ub @ x <= b_ub,  x >= lower.

    lower may contain -inf for free variables (internally split into a
    difference of nonnegatives); finite entries are handled by shifting.
    lower defaults to all zeros.
    """

    c: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lower: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.atleast_1d(np.asarray(self.c, dtype=float))
        n = self.c.size
        if n == 0:
            raise ValueError("problem must have at least one variable")
        self.a_eq = np.asarray(self.a_eq, dtype=float).reshape(-1, n)
        self.b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=float))
        if self.b_eq.size != self.a_eq.shape[0]:
            raise ValueError("a_eq/b_eq row mismatch")
        if self.a_ub is None:
            self.a_ub = np.zeros((0, n))
            self.b_ub = np.zeros(0)
        else:
            self.a_ub = np.asarray(self.a_ub, dtype=float).reshape(-1, n)
            self.b_ub = np.atleast_1d(np.asarray(self.b_ub, dtype=float))
            if self.b_ub.size != self.a_ub.shape[0]:
                raise ValueError("a_ub/b_ub row mismatch")
        if self.lower is None:
            self.lower = np.zeros(n)
        else:
            self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
            if self.lower.size != n:
                raise ValueError("lower bound length mismatch")
        for name, arr in (("b_eq", self.b_eq), ("b_ub", self.b_ub), ("c", self.c)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")


@dataclass
class LpSolution:
    x: np.ndarray | None
    objective: float
    status: str
    iterations: int = 0


def _to_standard_form(p: LpProblem):
    """Rewrite as min c_s @ z, A z = b, z >= 0; returns (c_s, A, b, recover)."""
    n = p.c.size
    free = ~np.isfinite(p.lower)
    shift = np.where(free, 0.0, p.lower)

    # one column per shifted variable, two per free variable
    cols = []
    c_s = []
    a_full = np.vstack([p.a_eq, p.a_ub])
    for j in range(n):
        cols.append(a_full[:, j])
        c_s.append(p.c[j])
        if free[j]:
            cols.append(-a_full[:, j])
            c_s.append(-p.c[j])
    n_eq, n_ub = p.a_eq.shape[0], p.a_ub.shape[0]
    b = np.concatenate([p.b_eq, p.b_ub]) - a_full @ shift
    a_std = np.column_stack(cols) if cols else np.zeros((n_eq + n_ub, 0))
    # slack columns for the inequality rows
    if n_ub:
        slack = np.vstack([np.zeros((n_eq, n_ub)), np.eye(n_ub)])
        a_std = np.hstack([a_std, slack])
        c_s.extend([0.0] * n_ub)

    split_index = []
    k = 0
    for j in range(n):
        split_index.append(k)
        k += 2 if free[j] else 1

    def recover(z: np.ndarray) -> np.ndarray:
        x = np.empty(n)
        for j in range(n):
            k0 = split_index[j]
            x[j] = (z[k0] - z[k0 + 1]) if free[j] else z[k0] + shift[j]
        return x

    return np.asarray(c_s), a_std, b, recover


def _pivot(t: np.ndarray, basis: list, row: int, col: int):
    t[row] /= t[row, col]
    other = [r for r in range(t.shape[0]) if r != row]
    t[other] -= np.outer(t[other, col], t[row])
    basis[row] = col


def _run_simplex(t: np.ndarray, basis: list, n_cols: int, tol: float, cap: int) -> tuple[str, int]:
    """Minimize the cost row of tableau t over columns [0, n_cols).

    Bland's rule: entering column is the lowest-index one with negative
    reduced cost, leaving row breaks ratio ties by lowest basis index.
    """
    iters = 0
    m = t.shape[0] - 1
    while True:
        negative = np.flatnonzero(t[-1, :n_cols] < -tol)
        if negative.size == 0:
            return OPTIMAL, iters
        entering = int(negative[0])
        col = t[:m, entering]
        ratios = np.full(m, np.inf)
        pos = col > tol
        ratios[pos] = t[:m, -1][pos] / col[pos]
        best = ratios.min()
        if not np.isfinite(best):
            return UNBOUNDED, iters
        candidates = np.flatnonzero(ratios <= best + tol * (1.0 + abs(best)))
        leaving = min(candidates, key=lambda r: basis[r])
        _pivot(t, basis, leaving, entering)
        iters += 1
        if iters > cap:
            raise RuntimeError("simplex iteration cap exceeded")


def simplex_lp(p: LpProblem, tol: float = 1e-9) -> LpSolution:
    """Solve an LpProblem; returns an optimal basic solution or a status."""
    c_s, a, b, recover = _to_standard_form(p)
    m, n_std = a.shape

    neg = b < 0
    a = a.copy()
    a[neg] *= -1.0
    b = np.where(neg, -b, b)

    cap = 2000 + 200 * (m + n_std)

    # phase 1: artificial basis, minimize the artificial mass
    t = np.zeros((m + 1, n_std + m + 1))
    t[:m, :n_std] = a
    t[:m, n_std:n_std + m] = np.eye(m)
    t[:m, -1] = b
    basis = list(range(n_std, n_std + m))
    t[-1, :] = -t[:m, :].sum(axis=0)  # reduced costs of sum(artificials)
    t[-1, n_std:n_std + m] = 0.0

    status, it1 = _run_simplex(t, basis, n_std, tol, cap)
    total_feas_gap = -t[-1, -1]
    if total_feas_gap > np.sqrt(tol) * (1.0 + np.abs(b).sum()):
        return LpSolution(None, np.inf, INFEASIBLE, it1)

    # drive remaining artificials out of the basis; drop redundant rows
    rows_to_drop = []
    for r in range(m):
        if basis[r] >= n_std:
            piv_cols = np.flatnonzero(np.abs(t[r, :n_std]) > tol)
            if piv_cols.size:
                _pivot(t, basis, r, int(piv_cols[0]))
            else:
                rows_to_drop.append(r)
    if rows_to_drop:
        keep = [r for r in range(m) if r not in rows_to_drop]
        t = t[keep + [m]]
        basis = [basis[r] for r in keep]
        m = len(keep)

    # phase 2: real objective, reduced against the current basis
    t = np.hstack([t[:, :n_std], t[:, -1:]])
    t[-1, :n_std] = c_s
    t[-1, -1] = 0.0
    for r in range(m):
        t[-1] -= c_s[basis[r]] * t[r]

    status, it2 = _run_simplex(t, basis, n_std, tol, cap)
    if status == UNBOUNDED:
        return LpSolution(None, -np.inf, UNBOUNDED, it1 + it2)

    z = np.zeros(n_std)
    for r in range(m):
        z[basis[r]] = t[r, -1]
    x = recover(z)
    return LpSolution(x, float(p.c @ x), OPTIMAL, it1 + it2)
