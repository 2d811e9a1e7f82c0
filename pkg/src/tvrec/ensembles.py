"""Measurement ensembles and row-distribution diagnostics.

Generators are pure functions of (shape parameters, seed). Gaussian and
Rademacher matrices are raw (no row normalization); the 1D Fourier sampler
always includes the zero frequency. Complex matrices are exposed to the real
solver stack as stacked real/imaginary blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .seeding import stream

GAUSSIAN = "gaussian"
RADEMACHER = "rademacher"
FOURIER1D = "fourier1d"

_SIGMA_QUANTILES = (0.90, 0.99)


@dataclass
class MeasurementEnsemble:
    matrix: np.ndarray
    family: str
    seed: int
    m: int
    n: int
    frequencies: np.ndarray | None = None  # fourier1d only


@dataclass
class SubgaussianParams:
    alpha: float   # lower bound on E|<row, u>| over unit directions
    sigma: float   # Gaussian-calibrated tail scale
    rho: float     # sigma / alpha

    def __post_init__(self):
        if self.alpha <= 0 or self.sigma <= 0:
            raise ValueError("alpha and sigma must be positive")
        if abs(self.rho * self.alpha - self.sigma) > 1e-12 * max(1.0, self.sigma):
            raise ValueError("rho must equal sigma/alpha")


def _check_shape(m: int, n: int):
    if m < 1 or n < 1:
        raise ValueError(f"matrix shape must be positive, got {m}x{n}")


def gaussian_matrix(m: int, n: int, seed: int) -> MeasurementEnsemble:
    """i.i.d. standard normal entries."""
    _check_shape(m, n)
    mat = stream(seed).standard_normal((m, n))
    return MeasurementEnsemble(mat, GAUSSIAN, seed, m, n)


def rademacher_matrix(m: int, n: int, seed: int) -> MeasurementEnsemble:
    """i.i.d. uniform +-1 entries."""
    _check_shape(m, n)
    mat = stream(seed).integers(0, 2, size=(m, n)) * 2.0 - 1.0
    return MeasurementEnsemble(mat, RADEMACHER, seed, m, n)


def fourier_rows_1d(n: int, m: int, seed: int) -> MeasurementEnsemble:
    """m distinct DFT rows with frequencies from {-floor(n/2)+1, ..., ceil(n/2)},
    conditioned to contain frequency 0. Entries exp(2*pi*i*k*j/n), j = 0..n-1."""
    _check_shape(m, n)
    if m > n:
        raise ValueError(f"m={m} exceeds the number of available frequencies n={n}")
    freqs_all = np.arange(-(n // 2) + 1, (n + 1) // 2 + 1)
    nonzero = freqs_all[freqs_all != 0]
    picked = stream(seed).choice(nonzero, size=m - 1, replace=False) if m > 1 else []
    omega = np.sort(np.concatenate([[0], picked])).astype(int)
    j = np.arange(n)
    mat = np.exp(2j * np.pi * np.outer(omega, j) / n)
    return MeasurementEnsemble(mat, FOURIER1D, seed, m, n, frequencies=omega)


def as_real_system(ens: MeasurementEnsemble) -> np.ndarray:
    """Real matrix for the solver stack: complex rows become [real; imag]."""
    if np.iscomplexobj(ens.matrix):
        return np.vstack([ens.matrix.real, ens.matrix.imag])
    return ens.matrix


def estimate_subgaussian_params(family: str, n: int, samples: int, seed: int,
                                directions: int = 20) -> SubgaussianParams:
    """Monte Carlo estimate of the row-marginal parameters (alpha, sigma, rho).

    alpha is the minimum over random unit directions u of the empirical mean
    of |<row, u>|. sigma fits a Gaussian-shaped tail to the 90th/99th
    empirical quantiles of |<row, u>| (worst direction): sigma = max_q
    t_hat(q) / z(q) with z(q) the standard normal two-sided quantile, so the
    Gaussian family calibrates to sigma = 1. rho = sigma/alpha.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if directions < 1:
        raise ValueError("need at least one direction")
    if family == GAUSSIAN:
        rows = stream(seed, 0).standard_normal((samples, n))
    elif family == RADEMACHER:
        rows = stream(seed, 0).integers(0, 2, size=(samples, n)) * 2.0 - 1.0
    else:
        raise ValueError(f"unsupported family for row estimation: '{family}'")

    # per-direction streams: mix(seed, 1, direction_index)
    dirs = np.empty((directions, n))
    for d in range(directions):
        u = stream(seed, 1, d).standard_normal(n)
        dirs[d] = u / np.linalg.norm(u)

    z = np.abs(rows @ dirs.T)  # samples x directions
    alpha = float(z.mean(axis=0).min())
    norm = NormalDist()
    sigma = 0.0
    for q in _SIGMA_QUANTILES:
        t_hat = np.quantile(z, q, axis=0).max()
        sigma = max(sigma, float(t_hat) / norm.inv_cdf((1.0 + q) / 2.0))
    return SubgaussianParams(alpha, sigma, sigma / alpha)


@dataclass
class FourierDensity2D:
    """Variable-density 2D frequency distribution eta(k) ~ min(C, 1/|k|^2).

    eta is indexed by frequencies k1, k2 in {-N/2+1, ..., N/2}; the zero
    frequency sits at array index N//2 - 1. Sampling weights are
    eta(omega)^(-1/2), computed on demand for the sampled frequencies.
    """

    N: int
    C: float
    eta: np.ndarray
    norm_const: float

    def index(self, k: int) -> int:
        if not -self.N // 2 + 1 <= k <= self.N // 2:
            raise ValueError(f"frequency {k} out of range for N={self.N}")
        return k + self.N // 2 - 1

    def eta_at(self, k1: int, k2: int) -> float:
        return float(self.eta[self.index(k1), self.index(k2)])

    def weight(self, k1: int, k2: int) -> float:
        return self.eta_at(k1, k2) ** -0.5

    def sample(self, m: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
        """Draw m i.i.d. frequency pairs; returns (freqs (m x 2), weights)."""
        rng = stream(seed)
        flat = rng.choice(self.N * self.N, size=m, p=self.eta.ravel())
        k1 = flat // self.N - (self.N // 2 - 1)
        k2 = flat % self.N - (self.N // 2 - 1)
        freqs = np.column_stack([k1, k2]).astype(int)
        weights = np.array([self.weight(a, b) for a, b in freqs])
        return freqs, weights


def fourier_density_2d(N: int, C: float) -> FourierDensity2D:
    """Normalized density min(C, 1/(k1^2+k2^2)) over the N x N frequency grid."""
    if N < 2 or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of two >= 2, got {N}")
    if C <= 0:
        raise ValueError(f"cap constant C must be positive, got {C}")
    k = np.arange(-N // 2 + 1, N // 2 + 1, dtype=float)
    k1sq = (k**2)[:, None]
    k2sq = (k**2)[None, :]
    with np.errstate(divide="ignore"):
        raw = np.minimum(C, 1.0 / (k1sq + k2sq))
    norm_const = 1.0 / raw.sum()
    return FourierDensity2D(N, C, norm_const * raw, norm_const)
