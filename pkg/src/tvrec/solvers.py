"""Solvers for the equality- and ball-constrained TV programs.

Two routes to the same objective:

* ``tv_lp_oracle``     -- exact minimizer of  min ||grad z||_1  s.t.  A z = y,
  via the standard positive-part split and the dense simplex (small instances);
* ``tv_primal_dual``   -- first-order primal-dual splitting for
  min ||grad z||_1  s.t.  ||A z - y||_2 <= eps,  any scale, eps >= 0
  (eps = 0 reduces to the equality program).

Keeping both is deliberate: the LP pins exact optima against which the
first-order method is validated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gradients import grad_adjoint_1d, grad_matrix, tv_aniso
from .lp import INFEASIBLE, LpProblem, simplex_lp

OPTIMAL = "Optimal"
MAX_ITER = "MaxIter"

_FEAS_TOL = 5e-8  # absolute slack on ||A x - y||_2 <= eps at termination


@dataclass
class SolverOptions:
    max_iterations: int = 50_000
    tolerance: float = 1e-9
    step_safety: float = 0.99

    def __post_init__(self):
        if self.max_iterations <= 0 or self.tolerance <= 0 or not 0 < self.step_safety < 1:
            raise ValueError("solver options must be positive (step_safety in (0,1))")


@dataclass
class SolveResult:
    x_hat: np.ndarray | None
    objective: float
    residual: float
    iterations: int
    status: str


def _check_system(a, y):
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"matrix must be 2D, got shape {a.shape}")
    m, n = a.shape
    if n < 2:
        raise ValueError("need at least 2 signal entries for a TV objective")
    if y.shape != (m,):
        raise ValueError(f"y must have length m={m}, got {y.shape}")
    return a, y, m, n


def tv_lp_oracle(a, y) -> SolveResult:
    """Exact TV minimizer subject to A z = y, as a linear program.

    Split grad z = t+ - t- with t+, t- >= 0 and minimize sum(t+ + t-).
    Returns status Infeasible when y is outside the range of A. The optimal
    vertex need not be unique; compare objectives, not minimizers, unless a
    uniqueness certificate holds.
    """
    a, y, m, n = _check_system(a, y)
    d = grad_matrix(n)
    p = n - 1
    # variables: [z (free), t+ (>=0), t- (>=0)]
    n_var = n + 2 * p
    c = np.concatenate([np.zeros(n), np.ones(2 * p)])
    a_eq = np.zeros((p + m, n_var))
    a_eq[:p, :n] = d
    a_eq[:p, n:n + p] = -np.eye(p)
    a_eq[:p, n + p:] = np.eye(p)
    a_eq[p:, :n] = a
    b_eq = np.concatenate([np.zeros(p), y])
    lower = np.concatenate([np.full(n, -np.inf), np.zeros(2 * p)])

    sol = simplex_lp(LpProblem(c, a_eq, b_eq, lower=lower))
    if sol.status == INFEASIBLE:
        return SolveResult(None, np.inf, np.inf, sol.iterations, INFEASIBLE)
    x = sol.x[:n]
    return SolveResult(x, tv_aniso(x), float(np.linalg.norm(a @ x - y)),
                       sol.iterations, OPTIMAL)


def operator_norm(op, n: int | None = None, rmatvec=None,
                  tol: float = 1e-9, max_iter: int = 50_000) -> float:
    """Largest singular value by power iteration on op^T op.

    ``op`` is either a dense matrix or a matvec callable (then ``rmatvec``
    and the input dimension ``n`` are required). Deterministic start vector.
    """
    if callable(op):
        if rmatvec is None or n is None:
            raise ValueError("callable operator needs rmatvec and n")
        matvec, rvec = op, rmatvec
    else:
        mat = np.asarray(op, dtype=float)
        n = mat.shape[1]
        matvec = lambda v: mat @ v
        rvec = lambda w: mat.T @ w

    v = np.random.default_rng(0).standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = rvec(matvec(v))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        new_sigma = np.sqrt(nw)
        if abs(new_sigma - sigma) <= tol * max(new_sigma, 1e-30):
            return float(new_sigma)
        sigma = new_sigma
    return float(sigma)


def tv_stack_norm(a: np.ndarray) -> float:
    """Norm of the stacked operator [grad; A] used for step sizes."""
    m, n = a.shape

    def matvec(x):
        return np.concatenate([np.diff(x), a @ x])

    def rmatvec(w):
        return grad_adjoint_1d(w[:n - 1], n) + a.T @ w[n - 1:]

    return operator_norm(matvec, n=n, rmatvec=rmatvec)


def tv_primal_dual(a, y, eps: float = 0.0,
                   opts: SolverOptions | None = None) -> SolveResult:
    """Primal-dual splitting for  min ||grad z||_1  s.t.  ||A z - y||_2 <= eps.

    Proximal iteration on the stacked operator [grad; A]: the l1 term acts on
    grad z through soft clipping of its dual, the eps-ball through the exact
    radial projection of its dual. Balanced steps sigma = tau = safety/||K||.
    Terminates when consecutive primal and dual iterates have both settled
    (relative change < tolerance) and the ball constraint is met; otherwise
    stops at max_iterations with status MaxIter.
    """
    a, y, m, n = _check_system(a, y)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if opts is None:
        opts = SolverOptions()

    # equilibrate the measurement block: (A, y, eps) / scale describes the
    # identical program but keeps the stacked operator balanced against the
    # gradient block (||grad|| <= 2), which the step sizes are tied to
    norm_a = operator_norm(a)
    scale = norm_a / 2.0 if norm_a > 0 else 1.0
    a = a / scale
    y = y / scale
    eps = eps / scale
    feas_tol = _FEAS_TOL / scale

    norm_k = tv_stack_norm(a)
    step = opts.step_safety / norm_k if norm_k > 0 else 1.0
    sigma = tau = step

    at = a.T.copy()
    x = np.zeros(n)
    x_bar = x.copy()
    p = np.zeros(n - 1)
    q = np.zeros(m)

    check_every = 20
    status = MAX_ITER
    it = 0
    for it in range(1, opts.max_iterations + 1):
        p_new = np.clip(p + sigma * np.diff(x_bar), -1.0, 1.0)
        w = q + sigma * (a @ x_bar - y)
        if eps > 0:
            nw = np.linalg.norm(w)
            q_new = w * max(0.0, 1.0 - sigma * eps / nw) if nw > 0 else w * 0.0
        else:
            q_new = w
        x_new = x - tau * (grad_adjoint_1d(p_new, n) + at @ q_new)
        x_bar = 2.0 * x_new - x
        dx = np.linalg.norm(x_new - x)
        dz = np.hypot(np.linalg.norm(p_new - p), np.linalg.norm(q_new - q))
        x, p, q = x_new, p_new, q_new

        if it % check_every == 0 or it == opts.max_iterations:
            rel_x = dx / max(1.0, np.linalg.norm(x))
            rel_z = dz / max(1.0, np.hypot(np.linalg.norm(p), np.linalg.norm(q)))
            violation = max(0.0, np.linalg.norm(a @ x - y) - eps)
            if rel_x < opts.tolerance and rel_z < opts.tolerance and violation <= feas_tol:
                status = OPTIMAL
                break

    residual = float(scale * np.linalg.norm(a @ x - y))
    return SolveResult(x, tv_aniso(x), residual, it, status)
