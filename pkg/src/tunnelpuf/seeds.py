"""Counter-based 64-bit seed derivation and deterministic variates.

All randomness in the package flows through :func:`mix64`, the SplitMix64
finalizer. It is a bijection on 64-bit integers, so offsetting its input by
distinct multiples of an odd constant never produces colliding streams.
Variates are computed from hashed counters rather than from a stateful
generator, which keeps results independent of evaluation order and
identical across platforms.
"""
import numpy as np
from scipy.special import ndtri

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_GAMMA = np.uint64(GOLDEN_GAMMA)


def mix64(x):
    """SplitMix64 finalizer on a Python int or an array of ``uint64``."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, np.ndarray):
        z = int(x) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)
    z = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _C1
        z = (z ^ (z >> np.uint64(27))) * _C2
    return z ^ (z >> np.uint64(31))


def derive_seed(seed, index):
    """Child seed number ``index`` of ``seed``.

    ``mix64(mix64(seed) + GAMMA * (index + 1))``. For a fixed parent, distinct
    indices in ``[0, 2**64 - 1)`` give distinct children.
    """
    if isinstance(index, np.ndarray):
        base = np.uint64(mix64(int(seed)))
        with np.errstate(over="ignore"):
            return mix64(base + _GAMMA * (index.astype(np.uint64) + np.uint64(1)))
    base = mix64(int(seed))
    return mix64((base + GOLDEN_GAMMA * (int(index) + 1)) & MASK64)


def unit_uniform(seeds):
    """Map 64-bit hashes to doubles strictly inside (0, 1)."""
    s = np.asarray(seeds, dtype=np.uint64)
    return ((s >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52


def standard_normal(seeds):
    """One N(0, 1) variate per seed, by inverse-CDF of :func:`unit_uniform`."""
    return ndtri(unit_uniform(mix64(np.asarray(seeds, dtype=np.uint64))))


def as_seed(value):
    """Validate and normalize a user-supplied seed to ``[0, 2**64)``."""
    v = int(value)
    if v < 0 or v > MASK64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {value}")
    return v


def derive_many(seeds, index):
    """Vectorized :func:`derive_seed` over an array of parent seeds."""
    s = np.asarray(seeds, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(mix64(s) + _GAMMA * np.uint64(int(index) + 1))
