"""Mean-width machinery and closed-form bound evaluators.

The support function of the gradient-sparse set is computed exactly by
dynamic programming over contiguous block partitions; the support function of
the TV ball is bracketed by a primal-dual iteration. Monte Carlo averages of
either give mean-width estimates. ``evaluate_bound`` evaluates the recovery
bound formulas with every unnamed constant supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gradients import grad_adjoint_1d, tv_aniso
from .seeding import stream


@dataclass
class WidthEstimate:
    mean: float
    std_error: float
    samples: int
    set_descriptor: str


def sup_k0s(g, s: int) -> tuple[float, tuple[int, ...]]:
    """Support function of the unit-ball gradient-sparse set at g.

    Over signals with at most s jumps (s+1 constant blocks) and unit l2 norm,
    sup <g, x> equals the maximum over contiguous partitions of [n] into at
    most s+1 blocks of sqrt(sum_b (block sum of g)^2 / block length); the
    finest allowed partition always dominates coarser ones, so exactly
    min(s+1, n) blocks are optimal. Dynamic program over (prefix, block
    count), O(n^2 s). Returns the value and the optimal 1-based jump set.
    """
    g = np.asarray(g, dtype=float)
    n = g.size
    if n < 1:
        raise ValueError("g must be nonempty")
    if not 0 <= s <= n - 1:
        raise ValueError(f"s must be in [0, n-1], got {s}")
    blocks = min(s + 1, n)
    prefix = np.concatenate([[0.0], np.cumsum(g)])

    score = np.full((blocks + 1, n + 1), -np.inf)
    parent = np.zeros((blocks + 1, n + 1), dtype=int)
    score[0, 0] = 0.0
    for k in range(1, blocks + 1):
        for i in range(k, n + 1):
            j = np.arange(k - 1, i)
            cand = score[k - 1, j] + (prefix[i] - prefix[j]) ** 2 / (i - j)
            best = int(np.argmax(cand))
            score[k, i] = cand[best]
            parent[k, i] = j[best]

    cuts = []
    i = n
    for k in range(blocks, 0, -1):
        j = int(parent[k, i])
        if j > 0:
            cuts.append(j)
        i = j
    return float(np.sqrt(score[blocks, n])), tuple(sorted(cuts))


def mean_width_k0s(n: int, s: int, samples: int, seed: int) -> WidthEstimate:
    """Monte Carlo mean width of the s-gradient-sparse unit-ball set."""
    if samples < 10:
        raise ValueError("need at least 10 samples")
    vals = np.empty(samples)
    for i in range(samples):
        g = stream(seed, i).standard_normal(n)
        vals[i], _ = sup_k0s(g, s)
    return WidthEstimate(2.0 * float(vals.mean()),
                         2.0 * float(vals.std(ddof=1)) / math.sqrt(samples),
                         samples, f"k0s(n={n},s={s})")


def _project_l1(v: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto the l1 ball of the given radius."""
    if radius <= 0:
        return np.zeros_like(v)
    abs_v = np.abs(v)
    if abs_v.sum() <= radius:
        return v.copy()
    u = np.sort(abs_v)[::-1]
    css = np.cumsum(u) - radius
    idx = np.arange(1, v.size + 1)
    rho = np.max(idx[u > css / idx])
    theta = css[rho - 1] / rho
    return np.sign(v) * np.maximum(abs_v - theta, 0.0)


def support_tv_ball(g, tau: float, rel_tol: float = 1e-4,
                    max_iter: int = 50_000) -> float:
    """Support function of {x : ||x||_2 <= 1, TV(x) <= tau} at g.

    Equals the dual value inf_u ||g - grad^T u||_2 + tau * ||u||_inf, which a
    primal-dual iteration drives down while its (negated, feasibility-
    repaired) dual iterate drives a primal lower bound up; the return value
    is the bracket midpoint once the gap is below rel_tol relatively.
    """
    g = np.asarray(g, dtype=float)
    n = g.size
    if n < 2:
        raise ValueError("g must have length >= 2")
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")

    norm_g = np.linalg.norm(g)
    if norm_g == 0.0:
        return 0.0
    if tau == 0.0:
        return float(abs(g.sum()) / math.sqrt(n))
    if tv_aniso(g / norm_g) <= tau:
        return float(norm_g)  # TV constraint inactive at the l2 maximizer

    # iterate on u (length n-1); dual variable xi of the fit term is -x
    sigma = tau_step = 0.99 / 2.0  # ||grad|| <= 2
    u = np.zeros(n - 1)
    u_bar = u.copy()
    xi = np.zeros(n)
    lower, upper = -np.inf, np.inf
    for it in range(1, max_iter + 1):
        w = xi + sigma * (grad_adjoint_1d(u_bar, n) - g)
        nw = np.linalg.norm(w)
        xi = w / max(1.0, nw)
        u_new = u - tau_step * np.diff(xi)
        u_new = u_new - _project_l1(u_new, tau_step * tau)
        u_bar = 2.0 * u_new - u
        u = u_new

        if it % 10 == 0 or it == max_iter:
            upper = min(upper, float(np.linalg.norm(g - grad_adjoint_1d(u, n))
                                     + tau * np.max(np.abs(u))))
            x = -xi
            tv_x = tv_aniso(x)
            if tv_x > tau:
                mean = x.mean()
                t = tau / tv_x
                x = mean + t * (x - mean)
            lower = max(lower, float(g @ x))
            if upper - lower <= rel_tol * max(upper, 1e-12):
                break
    return 0.5 * (lower + upper)


def mean_width_tv_ball(n: int, tau: float, samples: int, seed: int) -> WidthEstimate:
    """Monte Carlo mean width of the TV-ball set {||x||_2 <= 1, TV(x) <= tau}.

    Uses the same per-sample Gaussian streams as mean_width_k0s, so estimates
    taken at equal (n, samples, seed) share their g draws and inclusion
    relations hold sample by sample.
    """
    if samples < 10:
        raise ValueError("need at least 10 samples")
    vals = np.empty(samples)
    for i in range(samples):
        g = stream(seed, i).standard_normal(n)
        vals[i] = support_tv_ball(g, tau)
    return WidthEstimate(2.0 * float(vals.mean()),
                         2.0 * float(vals.std(ddof=1)) / math.sqrt(samples),
                         samples, f"tvball(n={n},tau={tau})")


@dataclass
class BoundQuery:
    kind: str
    params: dict[str, float] = field(default_factory=dict)


def _req(params: dict, kind: str, *names: str) -> list[float]:
    out = []
    for name in names:
        if name not in params:
            raise ValueError(f"bound '{kind}' requires parameter '{name}'")
        out.append(float(params[name]))
    return out


def _m_star(p):
    c, w, m = _req(p, "m-star", "C", "w", "m")
    return c * w / math.sqrt(m)


def _markov_tail(p):
    c, w, t, m = _req(p, "markov-tail", "C", "w", "t", "m")
    return c * w / (t * math.sqrt(m))


def _gordon_escape(p):
    m, w_hat = _req(p, "gordon-escape", "m", "w_hat")
    return 1.0 - 2.5 * math.exp(-((m / math.sqrt(m + 1.0) - w_hat) ** 2) / 18.0)


def _wk0s_upper(p):
    n, s = _req(p, "wk0s-upper", "n", "s")
    return 10.0 * math.sqrt(s * math.log(math.e * n / s))


def _what_s_upper(p):
    c, n, s = _req(p, "what-s-upper", "c", "n", "s")
    return c * (n * s) ** 0.25 * math.sqrt(math.log(2.0 * n))


def _inclusion_factor(p):
    n, s = _req(p, "inclusion-factor", "n", "s")
    return math.sqrt(n / s)


def _tropp_error(p):
    eps, c, alpha, rho, m, cc, sigma, w, t = _req(
        p, "tropp-error", "eps", "c", "alpha", "rho", "m", "C", "sigma", "w", "t")
    denom = c * alpha * rho**-2 * math.sqrt(m) - cc * sigma * w - alpha * t
    if denom <= 0.0:
        return math.inf
    return 2.0 * eps / denom


def _sample_complexity_1d(p):
    c1, c2, s, n = _req(p, "sample-complexity-1d", "c1", "c2", "s", "n")
    return c1 * math.sqrt(s * n) * (math.log(n) + c2)


def _sample_complexity_2d(p):
    c2, s, n = _req(p, "sample-complexity-2d", "c2", "s", "n")
    return c2 * s * math.log(n) ** 3


def _sample_complexity_3d(p):
    cd, s, n = _req(p, "sample-complexity-3d", "c_d", "s", "n")
    return cd * s * math.log(n)


def _fourier_samples(p):
    c, k, n, eta = _req(p, "fourier-samples", "c", "k", "n", "eta")
    return c * k * (math.log(n) + math.log(1.0 / eta))


BOUND_FORMULAS = {
    "m-star": (_m_star, "C * w / sqrt(m)"),
    "markov-tail": (_markov_tail, "C * w / (t * sqrt(m))"),
    "gordon-escape": (_gordon_escape,
                      "1 - 2.5 * exp(-(m/sqrt(m+1) - w_hat)^2 / 18)"),
    "wk0s-upper": (_wk0s_upper, "10 * sqrt(s * log(e*n/s))"),
    "what-s-upper": (_what_s_upper, "c * (n*s)^(1/4) * sqrt(log(2n))"),
    "inclusion-factor": (_inclusion_factor, "sqrt(n/s)"),
    "tropp-error": (_tropp_error,
                    "2*eps / max(c*alpha*rho^-2*sqrt(m) - C*sigma*w - alpha*t, 0)"),
    "sample-complexity-1d": (_sample_complexity_1d,
                             "c1 * sqrt(s*n) * (log(n) + c2)"),
    "sample-complexity-2d": (_sample_complexity_2d, "c2 * s * log(n)^3"),
    "sample-complexity-3d": (_sample_complexity_3d, "c_d * s * log(n)"),
    "fourier-samples": (_fourier_samples, "c * k * (log(n) + log(1/eta))"),
}


def evaluate_bound(query: BoundQuery) -> float:
    """Evaluate one of the closed-form bound formulas; pure in its inputs."""
    if query.kind not in BOUND_FORMULAS:
        known = ", ".join(sorted(BOUND_FORMULAS))
        raise ValueError(f"unknown bound kind '{query.kind}' (known: {known})")
    fn, _ = BOUND_FORMULAS[query.kind]
    return float(fn(query.params))
