"""Pseudo-resistor I-to-V conversion, differential gain and comparator.

Units: currents in pA, resistance in GOhm (pA * GOhm = mV), voltages in V,
noise and offset sigmas in uV referred to the pre-amplifier differential
voltage.
"""
import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import InvalidInputError
from .leakage import V_REF
from .seeds import derive_seed, standard_normal

KELVIN = 273.15
T_NOISE_REF = 35.0 + KELVIN
# Per-array comparator offset stream; distinct from any device index.
OFFSET_STREAM = 2**63 + 1


@dataclass(frozen=True)
class ReadoutConfig:
    v3: float = 0.6
    r_pseudo_nominal: float = 1e-4
    r_supply_coeff: float = 0.5
    gain_db: float = 30.0
    noise_sigma_ref: float = 0.014253932377312213
    offset_sigma: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise InvalidInputError(f"{f.name} must be finite")
        if self.r_pseudo_nominal <= 0 or self.gain_db <= 0:
            raise InvalidInputError("r_pseudo_nominal and gain_db must be positive")
        if self.noise_sigma_ref < 0 or self.offset_sigma < 0:
            raise InvalidInputError("noise and offset sigmas must be non-negative")

    @property
    def gain(self):
        return 10.0 ** (self.gain_db / 20.0)


def _finite(*xs):
    for x in xs:
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("readout inputs must be finite")


def i_to_v(i, v3, r_pseudo, vdd=V_REF):
    """``v3 - i * r_pseudo`` clamped to the rails ``[0, vdd]``."""
    _finite(i, v3, r_pseudo)
    if not np.all(np.asarray(r_pseudo) > 0):
        raise InvalidInputError("r_pseudo must be positive")
    v = v3 - np.asarray(i, dtype=np.float64) * r_pseudo * 1e-3
    v = np.clip(v, 0.0, vdd)
    return float(v) if v.ndim == 0 else v


def effective_r_pseudo(config, env):
    r = config.r_pseudo_nominal * (1.0 + config.r_supply_coeff * (env.vdd - V_REF))
    return max(r, 0.1 * config.r_pseudo_nominal)


def amplify(delta_v, gain_db, vdd=V_REF):
    """Linear voltage gain of ``gain_db`` decibels, saturating at +/- vdd."""
    _finite(delta_v)
    out = np.clip(np.asarray(delta_v, dtype=np.float64) * 10.0 ** (gain_db / 20.0), -vdd, vdd)
    return float(out) if out.ndim == 0 else out


def noise_sigma(config, env):
    """Pre-amplifier noise std (V) at ``env``; thermal sqrt(T) scaling."""
    return config.noise_sigma_ref * 1e-6 * math.sqrt((env.temperature + KELVIN) / T_NOISE_REF)


def compare(delta_v_amp, noise_sigma, offset, noise_seed):
    """Comparator decision; exact zero resolves to 0."""
    if noise_sigma < 0:
        raise InvalidInputError("noise_sigma must be non-negative")
    n = noise_sigma * float(standard_normal(np.uint64(noise_seed)))
    return int(delta_v_amp + offset + n > 0)


def compare_many(delta_v_amp, noise_sigma, offset, z):
    """Vectorized :func:`compare` given pre-drawn standard normals ``z``."""
    return (delta_v_amp + offset + noise_sigma * z > 0).astype(np.uint8)


def amplified_difference(i_o1, i_o2, config, env):
    """Amplified differential voltage ``G * (V_O1 - V_O2)``."""
    r = effective_r_pseudo(config, env)
    dv = i_to_v(i_o1, config.v3, r, env.vdd) - i_to_v(i_o2, config.v3, r, env.vdd)
    return amplify(dv, config.gain_db, env.vdd)


def read_bit(i_o1, i_o2, config, env, array_offset=0.0, noise_seed=0):
    """Full chain for one cell. ``array_offset`` is referred to the pre-amp input."""
    dv_amp = amplified_difference(i_o1, i_o2, config, env)
    g = config.gain
    return compare(dv_amp, g * noise_sigma(config, env), g * array_offset, noise_seed)


def read_bits(i_o1, i_o2, config, env, array_offset=0.0, z=None, noise=True):
    """Vectorized :func:`read_bit`.

    ``z`` holds standard normals broadcastable against the currents (e.g. shape
    ``(trials, n)``); ``noise=False`` forces the noise-free decision.
    """
    dv_amp = amplified_difference(i_o1, i_o2, config, env)
    g = config.gain
    if not noise or z is None:
        return compare_many(dv_amp, 0.0, g * array_offset, 0.0)
    return compare_many(dv_amp, g * noise_sigma(config, env), g * array_offset, z)


def array_offset(array_seed, config):
    """Static comparator offset (V, pre-amp referred) drawn once per array."""
    if config.offset_sigma == 0:
        return 0.0
    z = float(standard_normal(np.uint64(derive_seed(array_seed, OFFSET_STREAM))))
    return config.offset_sigma * 1e-6 * z
