"""Counter-based seed derivation.

Every stochastic routine in this package owns its RNG stream, derived from a
master seed plus integer coordinates (sample index, grid cell, trial number).
Derivation is a fixed splitmix64 mixing chain, so results never depend on
execution order or worker count: stream_seed = mix(master, *indices).
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _splitmix64(z: int) -> int:
    z = (z + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def mix(seed: int, *indices: int) -> int:
    """Derive a 64-bit stream seed from a master seed and integer coordinates."""
    h = _splitmix64(seed & _MASK)
    for ix in indices:
        h = _splitmix64(h ^ (ix & _MASK))
    return h


def stream(seed: int, *indices: int) -> np.random.Generator:
    """Fresh numpy Generator for the (seed, *indices) coordinate."""
    return np.random.default_rng(mix(seed, *indices))
