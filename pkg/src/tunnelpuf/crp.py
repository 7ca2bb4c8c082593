"""Challenge-response generation over a :class:`~tunnelpuf.array.PufArray`.

Noise for bit ``k`` of a trial comes from ``derive_seed(trial_seed, k)``;
trial ``t`` of :func:`repeat_evaluate` uses ``trial_seed = base_seed + t``.
Both derivations are index-based, so bits and trials can be evaluated in any
order with identical results.
"""
import numpy as np

from .array import Response, branch_currents
from .errors import InvalidInputError
from .leakage import NOMINAL_ENV
from .readout import ReadoutConfig, array_offset, read_bits
from .seeds import MASK64, as_seed, derive_seed, standard_normal


def trial_seeds(base_seed, trials):
    base = as_seed(base_seed)
    return [(base + t) & MASK64 for t in range(trials)]


def noise_normals(trial_seed_list, n):
    """Standard normals of shape ``(len(trial_seed_list), n)``."""
    idx = np.arange(n, dtype=np.uint64)
    return np.stack([standard_normal(derive_seed(s, idx)) for s in trial_seed_list])


def _currents(array, challenge, env):
    return branch_currents(array, env, challenge.codes)


def golden_response(array, challenge, env=NOMINAL_ENV, config=None):
    """Noise-free readout (static offset included); the enrollment reference."""
    config = config if config is not None else ReadoutConfig()
    i1, i2 = _currents(array, challenge, env)
    return Response(read_bits(i1, i2, config, env, array_offset(array.array_seed, config),
                              noise=False))


def noisy_bits(array, challenge, env, config, z):
    """Noisy readouts for a block of pre-drawn normals ``z`` of shape (trials, n)."""
    i1, i2 = _currents(array, challenge, env)
    return read_bits(i1, i2, config, env, array_offset(array.array_seed, config), z)


def evaluate_challenge(array, challenge, env, config, trial_seed):
    z = noise_normals([as_seed(trial_seed)], len(challenge))
    return Response(noisy_bits(array, challenge, env, config, z)[0])


def repeat_evaluate(array, challenge, env, config, trials, base_seed):
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    z = noise_normals(trial_seeds(base_seed, trials), len(challenge))
    return [Response(row) for row in noisy_bits(array, challenge, env, config, z)]
