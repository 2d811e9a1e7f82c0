"""Discrete 1D/2D gradients, TV seminorms, jump supports, and signal generators.

Conventions used throughout the package:

* signals are plain 1D numpy arrays of length n >= 2; N x N grids are 2D arrays;
* the forward difference (grad_1d) maps length n to length n-1;
* jump indices are 1-based: index i in [1, n-1] means x[i+1] != x[i] in
  1-based coordinates (out[i-1] of grad_1d is nonzero);
* "s jumps" means at most s+1 constant blocks.
"""

from __future__ import annotations

import numpy as np


def _as_signal(x, min_len: int = 2) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"signal must be 1D, got shape {x.shape}")
    if x.size < min_len:
        raise ValueError(f"signal length {x.size} < {min_len}")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal contains non-finite values")
    return x


def grad_1d(x) -> np.ndarray:
    """Forward differences: out[i] = x[i+1] - x[i], length n-1."""
    x = _as_signal(x)
    return np.diff(x)


def grad_adjoint_1d(v, n: int) -> np.ndarray:
    """Adjoint of grad_1d: <grad_1d(x), v> == <x, grad_adjoint_1d(v, n)>."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size != n - 1:
        raise ValueError(f"adjoint input must have length n-1={n - 1}, got {v.shape}")
    out = np.zeros(n)
    out[:-1] -= v
    out[1:] += v
    return out


def grad_matrix(n: int) -> np.ndarray:
    """Dense (n-1) x n forward-difference matrix."""
    if n < 2:
        raise ValueError("n must be >= 2")
    d = np.zeros((n - 1, n))
    idx = np.arange(n - 1)
    d[idx, idx] = -1.0
    d[idx, idx + 1] = 1.0
    return d


def tv_aniso(x) -> float:
    """Anisotropic TV seminorm: l1 norm of the forward differences."""
    return float(np.abs(grad_1d(x)).sum())


def tv_iso_2d(grid) -> float:
    """Isotropic TV of a square grid: per-pixel l2 norm of the forward-
    difference pair, summed over pixels. Differences past the last row or
    column are zero (non-periodic boundary)."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"grid must be square 2D, got shape {g.shape}")
    if g.shape[0] < 2:
        raise ValueError("grid size must be >= 2")
    if not np.all(np.isfinite(g)):
        raise ValueError("grid contains non-finite values")
    dx = np.zeros_like(g)
    dy = np.zeros_like(g)
    dx[:-1, :] = g[1:, :] - g[:-1, :]
    dy[:, :-1] = g[:, 1:] - g[:, :-1]
    return float(np.sqrt(dx**2 + dy**2).sum())


def jump_support(x, tol: float = 0.0) -> np.ndarray:
    """1-based indices i in [1, n-1] where |x[i+1] - x[i]| > tol."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    d = grad_1d(x)
    return np.flatnonzero(np.abs(d) > tol) + 1


def gen_gradient_sparse(n: int, s: int, rng) -> np.ndarray:
    """Unit-norm signal with exactly s jump positions chosen uniformly.

    Block values are i.i.d. standard normal; the result is normalized to
    unit l2 norm. The jump count can drop below s only when two adjacent
    blocks draw equal values (measure zero).
    """
    rng = np.random.default_rng(rng)
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 <= s <= n - 1:
        raise ValueError(f"s must be in [0, n-1], got s={s}, n={n}")
    jumps = np.sort(rng.choice(n - 1, size=s, replace=False)) + 1
    values = rng.standard_normal(s + 1)
    x = np.empty(n)
    bounds = np.concatenate(([0], jumps, [n]))
    for b, (lo, hi) in enumerate(zip(bounds[:-1], bounds[1:])):
        x[lo:hi] = values[b]
    norm = np.linalg.norm(x)
    if norm == 0.0:  # only if every block drew exactly 0.0
        x[:] = 1.0
        norm = np.sqrt(n)
    return x / norm


def witness_x1(n: int, eps: float) -> np.ndarray:
    """Alternating near-constant vector sqrt((1 - (-1)^k eps) / n), k = 1..n.

    Unit norm for even n (the alternating eps terms cancel exactly), small
    anisotropic TV, yet jumps at every interior position: the standard
    witness that gradient-compressible vectors can have full jump support.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if not 0 <= eps < 1:
        raise ValueError(f"eps must be in [0, 1), got {eps}")
    k = np.arange(1, n + 1)
    signs = np.where(k % 2 == 0, 1.0, -1.0)  # (-1)^k for 1-based k
    return np.sqrt((1.0 - signs * eps) / n)
