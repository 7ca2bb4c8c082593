"""Uniformity, entropy, fractional Hamming distance and bit error rate."""
import math
from dataclasses import dataclass, replace
from itertools import product

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtr

from .crp import golden_response, noise_normals, noisy_bits, trial_seeds
from .errors import CalibrationError, InvalidInputError
from .leakage import NOMINAL_ENV, Environment
from .readout import amplified_difference, array_offset, noise_sigma
from .array import branch_currents

DEFAULT_TEMPS = tuple(float(t) for t in range(0, 101, 10))
DEFAULT_VDDS = (0.9, 1.0, 1.1, 1.2, 1.3)
STRESS_ENV = Environment(vdd=0.9, temperature=35.0)
TARGET_STRESS_BER = 0.049316


@dataclass(frozen=True)
class FhdStats:
    pair_count: int
    mean: float
    std: float


@dataclass(frozen=True)
class BerGridPoint:
    vdd: float
    temperature: float
    trials: int
    ber: float


def _bits(x):
    if hasattr(x, "bits"):
        x = x.bits
    if isinstance(x, str):
        x = [c == "1" for c in x]
    return np.asarray(x, dtype=np.uint8)


def uniformity(bits):
    b = _bits(bits)
    if b.size == 0:
        raise InvalidInputError("uniformity of an empty sequence is undefined")
    return float(b.sum()) / b.size


def shannon_entropy(p):
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"probability {p} outside [0, 1]")
    return -sum(q * math.log2(q) for q in (p, 1.0 - p) if q > 0)


def fhd(a, b):
    a, b = _bits(a), _bits(b)
    if a.size != b.size or a.size == 0:
        raise InvalidInputError("fhd needs two non-empty sequences of equal length")
    return float(np.count_nonzero(a != b)) / a.size


def inter_fhd_stats(responses):
    """Mean and population std of the FHD over all unordered pairs."""
    m = np.stack([_bits(r) for r in responses]) if len(responses) else np.empty((0, 0))
    if m.shape[0] < 2:
        raise InvalidInputError("inter-array FHD needs at least two responses")
    a, n = m.shape
    # Pairwise mismatch counts from inner products of the +/-1 encoding.
    s = 2.0 * m - 1.0
    d = (n - s @ s.T) / (2.0 * n)
    iu = np.triu_indices(a, k=1)
    vals = d[iu]
    return FhdStats(pair_count=int(vals.size), mean=float(vals.mean()), std=float(vals.std()))


def ber(reference, trials):
    """Total mismatches over total bits, pooled across trials."""
    ref = _bits(reference)
    t = np.stack([_bits(x) for x in trials]) if len(trials) else None
    if t is None:
        raise InvalidInputError("ber needs at least one trial")
    if t.shape[1] != ref.size:
        raise InvalidInputError("trial and reference lengths differ")
    return float(np.count_nonzero(t != ref[None, :])) / t.size


def ber_sweep(array, challenge, config, vdd_list=DEFAULT_VDDS, temp_list=DEFAULT_TEMPS,
              trials=100, seed=0):
    """BER on a (vdd x temperature) grid against the 1.2 V / 35 C golden response.

    Every grid point reuses the same trial seeds, so differences between points
    reflect the environment rather than fresh noise draws.
    """
    if not len(vdd_list) or not len(temp_list):
        raise InvalidInputError("ber_sweep needs non-empty voltage and temperature grids")
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    ref = golden_response(array, challenge, NOMINAL_ENV, config).bits
    z = noise_normals(trial_seeds(seed, trials), len(challenge))
    out = []
    for vdd, temp in product(vdd_list, temp_list):
        env = Environment(vdd=float(vdd), temperature=float(temp))
        bits = noisy_bits(array, challenge, env, config, z)
        out.append(BerGridPoint(env.vdd, env.temperature, trials,
                                float(np.count_nonzero(bits != ref)) / bits.size))
    return out


def expected_ber(arrays, challenge, config, env):
    """Analytic mean flip probability against the golden bits.

    Each bit flips with probability ``Phi(-m / (G * sigma))`` where ``m`` is its
    amplified margin signed towards the golden value. Used as the objective of
    :func:`calibrate_noise_sigma` and as an oracle for simulated BERs.
    """
    g = config.gain
    s = g * noise_sigma(config, env)
    probs = []
    for arr in arrays:
        ref = golden_response(arr, challenge, NOMINAL_ENV, config).bits
        i1, i2 = branch_currents(arr, env, challenge.codes)
        m = amplified_difference(i1, i2, config, env) + g * array_offset(arr.array_seed, config)
        signed = np.where(ref == 1, m, -m)
        probs.append(ndtr(-signed / s) if s > 0 else (signed <= 0).astype(float))
    return float(np.mean(probs))


def calibrate_noise_sigma(arrays, challenge, config, target_ber=TARGET_STRESS_BER,
                          env=STRESS_ENV):
    """Solve for ``noise_sigma_ref`` (uV) giving ``target_ber`` at ``env``."""
    if not 0 < target_ber < 0.5:
        raise InvalidInputError("target_ber must lie in (0, 0.5)")

    def gap(log_sigma):
        c = replace(config, noise_sigma_ref=math.exp(log_sigma))
        return expected_ber(arrays, challenge, c, env) - target_ber

    lo, hi = math.log(1e-9), math.log(1e9)
    if gap(lo) >= 0:
        raise CalibrationError("noise-free BER at the stress point already exceeds the target")
    if gap(hi) <= 0:
        raise CalibrationError("target BER unreachable with Gaussian comparator noise")
    return math.exp(brentq(gap, lo, hi, xtol=1e-12, rtol=1e-12))
