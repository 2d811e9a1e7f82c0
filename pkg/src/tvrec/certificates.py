"""Uniqueness certificates for the equality-constrained TV program.

Three routes of increasing strength and cost:

* ``fuchs_check``      -- closed-form sufficient condition from one dense solve;
* ``dual_certificate`` -- exact minimum-margin dual vector by linear
  programming (if and only if condition, given injectivity);
* ``nsp_check``        -- brute-force nullspace property, certifying uniform
  recovery of every s-gradient-sparse signal at once.

Strict inequalities from the optimality conditions are decided with an
explicit strictness tolerance; margins inside the tolerance band are reported
as borderline rather than certified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .gradients import grad_1d, grad_matrix, jump_support
from .lp import INFEASIBLE, LpProblem, simplex_lp, UNBOUNDED

UNIQUE = "Unique"
NOT_CERTIFIED = "NotCertified"
INJECTIVITY_FAILED = "InjectivityFailed"

STRICTNESS_TOL = 1e-7


@dataclass
class Certificate:
    verdict: str
    injective: bool
    margin: float
    dual_v: np.ndarray | None
    borderline: bool = False


@dataclass
class NspReport:
    s: int
    holds: bool
    worst_ratio: float
    witness_set: tuple[int, ...] | None


def _complement_rows(n: int, jumps_1based) -> np.ndarray:
    """0-based rows of the (n-1) x n gradient off the 1-based jump set."""
    mask = np.ones(n - 1, dtype=bool)
    jumps = np.asarray(jumps_1based, dtype=int)
    if jumps.size:
        mask[jumps - 1] = False
    return np.flatnonzero(mask)


def injectivity_check(a, jumps_1based) -> bool:
    """ker of the gradient rows off the jump set meets ker(A) only at 0."""
    a = np.asarray(a, dtype=float)
    n = a.shape[1]
    rows = _complement_rows(n, jumps_1based)
    stacked = np.vstack([a, grad_matrix(n)[rows]])
    svals = np.linalg.svd(stacked, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return False
    rank = int(np.sum(svals > 1e-10 * svals[0]))
    return rank == n


def dual_certificate(a, x, jump_tol: float = 1e-8) -> Certificate:
    """Minimum-margin dual vector for x as a TV minimizer under A z = A x.

    Solves  min t  s.t.  grad^T v = A^T w,  v = sign(grad x) on the jump set,
    |v| <= t off it. Verdict is Unique when the stacked-kernel injectivity
    holds and the optimal margin t* is strictly below 1.
    """
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    m, n = a.shape
    if x.shape != (n,):
        raise ValueError(f"x must have length n={n}")

    jumps = jump_support(x, jump_tol)
    comp = _complement_rows(n, jumps)
    injective = injectivity_check(a, jumps)

    d = grad_matrix(n)
    sign_full = np.zeros(n - 1)
    if jumps.size:
        sign_full[jumps - 1] = np.sign(grad_1d(x)[jumps - 1])

    # variables: [v_comp (free), w (free), t (>= 0)]
    nc = comp.size
    n_var = nc + m + 1
    c = np.zeros(n_var)
    c[-1] = 1.0
    a_eq = np.zeros((n, n_var))
    a_eq[:, :nc] = d[comp].T
    a_eq[:, nc:nc + m] = -a.T
    b_eq = -d.T @ sign_full
    a_ub = np.zeros((2 * nc, n_var))
    a_ub[:nc, :nc] = np.eye(nc)
    a_ub[nc:, :nc] = -np.eye(nc)
    a_ub[:, -1] = -1.0
    b_ub = np.zeros(2 * nc)
    lower = np.concatenate([np.full(nc + m, -np.inf), [0.0]])

    sol = simplex_lp(LpProblem(c, a_eq, b_eq, a_ub, b_ub, lower))
    if sol.status == INFEASIBLE:
        verdict = INJECTIVITY_FAILED if not injective else NOT_CERTIFIED
        return Certificate(verdict, injective, np.inf, None)

    margin = float(sol.x[-1])
    v = sign_full.copy()
    v[comp] = sol.x[:nc]
    borderline = abs(margin - 1.0) <= STRICTNESS_TOL
    if not injective:
        verdict = INJECTIVITY_FAILED
    elif margin < 1.0 - STRICTNESS_TOL:
        verdict = UNIQUE
    else:
        verdict = NOT_CERTIFIED
    return Certificate(verdict, injective, margin, v, borderline)


def fuchs_check(a, x, jump_tol: float = 1e-8,
                cond_cap: float = 1e12) -> tuple[bool, float]:
    """Closed-form sufficient certificate from one least-squares-type solve.

    Solves (gradc^T gradc + A^T A) u = grad^T sign(grad x) with gradc the
    gradient rows off the jump set, then checks the off-support entries of
    grad u stay strictly inside the unit band. A pass always implies the LP
    certificate: v = (sign on the jump set, -(grad u) off it), w = A u is
    feasible there with the same margin.
    """
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    n = a.shape[1]
    if x.shape != (n,):
        raise ValueError(f"x must have length n={n}")

    jumps = jump_support(x, jump_tol)
    comp = _complement_rows(n, jumps)
    d = grad_matrix(n)
    sign_full = np.zeros(n - 1)
    if jumps.size:
        sign_full[jumps - 1] = np.sign(grad_1d(x)[jumps - 1])

    gram = d[comp].T @ d[comp] + a.T @ a
    if np.linalg.cond(gram) > cond_cap:
        raise np.linalg.LinAlgError(
            "gradient/measurement gram matrix is numerically singular; "
            "the injectivity precondition fails")
    u = np.linalg.solve(gram, d.T @ sign_full)
    margin = float(np.max(np.abs((d @ u)[comp]))) if comp.size else 0.0
    return margin < 1.0 - 1e-9, margin


def nsp_check(a, s: int, strict_tol: float = STRICTNESS_TOL) -> NspReport:
    """Brute-force TV nullspace property of order s.

    For every candidate support of size <= s and every sign pattern, maximize
    the signed on-support gradient mass of kernel vectors normalized to unit
    off-support mass; the property holds when every such maximum stays
    strictly below 1. Combinatorial: capped at n <= 20, s <= 4.
    """
    a = np.asarray(a, dtype=float)
    m, n = a.shape
    if n > 20 or s > 4:
        raise ValueError("combinatorial nsp_check is capped at n <= 20, s <= 4; "
                         "larger instances need a sampling approach")
    if not 0 <= s <= n - 1:
        raise ValueError(f"s must be in [0, n-1], got {s}")

    # kernel basis from the SVD
    u_svd, svals, vt = np.linalg.svd(a)
    cutoff = (svals[0] * 1e-12) if svals.size else 0.0
    rank = int(np.sum(svals > cutoff))
    basis = vt[rank:].T  # n x k, orthonormal columns
    k = basis.shape[1]
    if k == 0:
        return NspReport(s, True, 0.0, None)

    ones = np.ones(n) / np.sqrt(n)
    if np.linalg.norm(a @ ones) <= 1e-10 * max(1.0, np.linalg.norm(a)):
        # constant vectors have zero gradient: the strict inequality fails
        return NspReport(s, False, np.inf, ())

    g = grad_matrix(n) @ basis  # (n-1) x k
    worst = 0.0
    witness = None
    for size in range(1, min(s, n - 1) + 1):
        for supp in itertools.combinations(range(n - 1), size):
            rows = np.array(supp)
            comp = np.setdiff1d(np.arange(n - 1), rows)
            nc = comp.size
            for signs in itertools.product((1.0, -1.0), repeat=size):
                sigma = np.array(signs)
                # variables: [c (free, k), r (>= 0, nc)]
                n_var = k + nc
                c_obj = np.zeros(n_var)
                c_obj[:k] = -(sigma @ g[rows])
                a_ub = np.zeros((2 * nc + 1, n_var))
                a_ub[:nc, :k] = g[comp]
                a_ub[:nc, k:] = -np.eye(nc)
                a_ub[nc:2 * nc, :k] = -g[comp]
                a_ub[nc:2 * nc, k:] = -np.eye(nc)
                a_ub[-1, k:] = 1.0
                b_ub = np.zeros(2 * nc + 1)
                b_ub[-1] = 1.0
                lower = np.concatenate([np.full(k, -np.inf), np.zeros(nc)])
                sol = simplex_lp(LpProblem(c_obj, np.zeros((0, n_var)),
                                           np.zeros(0), a_ub, b_ub, lower))
                if sol.status == UNBOUNDED:
                    return NspReport(s, False, np.inf,
                                     tuple(int(r) + 1 for r in rows))
                value = -sol.objective
                if value > worst:
                    worst = value
                    witness = tuple(int(r) + 1 for r in rows)
    return NspReport(s, worst < 1.0 - strict_tol, float(worst), witness)
