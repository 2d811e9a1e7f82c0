"""Phase-transition and uniqueness Monte Carlo experiments.

Every trial owns a seed derived as mix(master, n, m, trial), so grids are
bit-reproducible regardless of worker count or row ordering, and adding rows
never perturbs existing cells. Error metric and success threshold are
recorded in the config (the figure being reproduced defines neither).
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .certificates import UNIQUE, Certificate, dual_certificate
from .ensembles import GAUSSIAN, RADEMACHER, gaussian_matrix, rademacher_matrix
from .gradients import gen_gradient_sparse
from .seeding import mix
from .solvers import OPTIMAL, SolverOptions, tv_lp_oracle, tv_primal_dual

_FAMILIES = {GAUSSIAN: gaussian_matrix, RADEMACHER: rademacher_matrix}


@dataclass
class PhaseConfig:
    s: int = 5
    n_list: tuple[int, ...] = (32, 64, 128, 256)
    m_stride: int = 2
    m_grid: dict[int, tuple[int, ...]] | None = None  # explicit override per n
    trials: int = 10
    ensemble: str = RADEMACHER
    success_tol: float = 1e-4
    eps: float = 0.0
    seed: int = 0
    solver: SolverOptions = field(default_factory=lambda: SolverOptions(
        max_iterations=50_000, tolerance=1e-6))

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.success_tol <= 0:
            raise ValueError("success_tol must be positive")
        if self.ensemble not in _FAMILIES:
            raise ValueError(f"unknown ensemble '{self.ensemble}'")
        if self.s < 0 or any(self.s > n - 1 for n in self.n_list):
            raise ValueError("need 0 <= s <= n-1 for every n")
        for n in self.n_list:
            if any(m > n for m in self.m_values(n)):
                raise ValueError(f"m values must not exceed n={n}")

    def m_values(self, n: int) -> tuple[int, ...]:
        if self.m_grid is not None and n in self.m_grid:
            return tuple(self.m_grid[n])
        return tuple(range(self.m_stride, n + 1, self.m_stride))


@dataclass
class PhaseCell:
    mean_error: float
    success_rate: float
    trials: int


@dataclass
class PhaseGrid:
    cells: dict[tuple[int, int], PhaseCell]
    config: PhaseConfig
    trial_seeds: dict[tuple[int, int], tuple[int, ...]]


def _run_trial(cfg: PhaseConfig, n: int, m: int, trial: int) -> tuple[float, bool]:
    trial_seed = mix(cfg.seed, n, m, trial)
    x0 = gen_gradient_sparse(n, cfg.s, mix(trial_seed, 0))
    ens = _FAMILIES[cfg.ensemble](m, n, mix(trial_seed, 1))
    y = ens.matrix @ x0
    res = tv_primal_dual(ens.matrix, y, cfg.eps, cfg.solver)
    err = float(np.linalg.norm(res.x_hat - x0) / np.linalg.norm(x0))
    success = err <= cfg.success_tol and res.status == OPTIMAL
    return err, success


def _run_cell(args) -> tuple[tuple[int, int], PhaseCell]:
    cfg, n, m = args
    errors = np.empty(cfg.trials)
    successes = 0
    for k in range(cfg.trials):
        err, ok = _run_trial(cfg, n, m, k)
        errors[k] = err
        successes += ok
    return (n, m), PhaseCell(float(errors.mean()), successes / cfg.trials, cfg.trials)


def run_phase_grid(cfg: PhaseConfig, workers: int = 1) -> PhaseGrid:
    """Recovery error/success grid over (n, m) cells. MaxIter solves count as
    failures (their error is still recorded); nothing aborts a grid."""
    tasks = [(cfg, n, m) for n in cfg.n_list for m in cfg.m_values(n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, tasks, chunksize=4))
    else:
        results = [_run_cell(t) for t in tasks]
    cells = dict(sorted(results))
    seeds = {(n, m): tuple(mix(cfg.seed, n, m, k) for k in range(cfg.trials))
             for (n, m) in cells}
    return PhaseGrid(cells, cfg, seeds)


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    threshold: float
    points: list[tuple[float, float]]  # (log n, log m*)
    residual_sumsq: float
    alt_slope: float           # same fit against log(log n)
    alt_intercept: float
    alt_residual_sumsq: float


def _least_squares_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    coeff, res, *_ = np.polyfit(x, y, 1, full=True)
    rss = float(res[0]) if res.size else 0.0
    return float(coeff[0]), float(coeff[1]), rss


def fit_transition_slope(grid: PhaseGrid, threshold: float) -> SlopeFit:
    """Least-squares slope of log m*(n) against log n.

    m*(n) is the smallest grid m whose success rate reaches the threshold,
    linearly interpolated on the success-rate axis between the bracketing
    grid values. Rows that never reach the threshold are dropped with a
    warning; fewer than 3 usable rows is an error.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0,1), got {threshold}")
    points = []
    for n in sorted(set(n for n, _ in grid.cells)):
        ms = sorted(m for nn, m in grid.cells if nn == n)
        rates = [grid.cells[(n, m)].success_rate for m in ms]
        hit = next((i for i, r in enumerate(rates) if r >= threshold), None)
        if hit is None:
            warnings.warn(f"row n={n} never reaches success rate {threshold}; excluded")
            continue
        if hit == 0:
            m_star = float(ms[0])
        else:
            r0, r1 = rates[hit - 1], rates[hit]
            m0, m1 = ms[hit - 1], ms[hit]
            m_star = m0 + (threshold - r0) * (m1 - m0) / (r1 - r0)
        points.append((math.log(n), math.log(m_star)))
    if len(points) < 3:
        raise ValueError(f"only {len(points)} usable rows; need >= 3 for a fit")

    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    slope, intercept, rss = _least_squares_line(xs, ys)
    alt_slope, alt_intercept, alt_rss = _least_squares_line(np.log(xs), ys)
    return SlopeFit(slope, intercept, threshold, points, rss,
                    alt_slope, alt_intercept, alt_rss)


@dataclass
class UniquenessResult:
    fraction: float
    verdicts: list[Certificate]
    oracle_errors: list[float]
    mismatches: int  # certified Unique but the LP oracle missed x0


def run_uniqueness_mc(family: str, n: int, m: int, s: int, trials: int,
                      seed: int) -> UniquenessResult:
    """Fraction of gradient s-sparse draws certified as unique TV minimizers.

    Each trial draws x0 and a fresh matrix, runs the dual certificate, and
    cross-validates against exact LP recovery; disagreements (Unique verdict
    without oracle recovery) are counted, never silently dropped.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    if n > 20:
        raise ValueError("certificate path is capped at n <= 20")
    if family != "identity" and family not in _FAMILIES:
        raise ValueError(f"unknown ensemble '{family}'")

    verdicts = []
    errors = []
    mismatches = 0
    unique_count = 0
    for t in range(trials):
        trial_seed = mix(seed, n, m, t)
        x0 = gen_gradient_sparse(n, s, mix(trial_seed, 0))
        if family == "identity":
            a = np.eye(n)
        else:
            a = _FAMILIES[family](m, n, mix(trial_seed, 1)).matrix
        cert = dual_certificate(a, x0)
        oracle = tv_lp_oracle(a, a @ x0)
        err = (float(np.linalg.norm(oracle.x_hat - x0))
               if oracle.x_hat is not None else math.inf)
        verdicts.append(cert)
        errors.append(err)
        if cert.verdict == UNIQUE:
            unique_count += 1
            if err > 1e-6:
                mismatches += 1
    return UniquenessResult(unique_count / trials, verdicts, errors, mismatches)
