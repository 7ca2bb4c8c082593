"""Behavioral gate-tunneling leakage model with process variation.

Each leakage transistor carries a current

    I = k_local * k_dt * area * (v2 / t_ox)**2 * exp(-b_dt * t_ox / v2)
        * (1 + alpha_t * (T - 35))

in picoamperes, split into five fixed fractions (gate-source, gate-drain,
the two gate-channel paths and gate-bulk). Oxide thickness and the local
current factor are sampled per device from counter-based seeds.
"""
import math
from dataclasses import dataclass, fields, replace

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import CalibrationError, InvalidInputError
from .seeds import as_seed, derive_many, derive_seed, unit_uniform

T_REF = 35.0
V_REF = 1.2
VDD_RANGE = (0.9, 1.3)
# Seed used by calibrate() for its Monte Carlo oracle when none is given.
CALIBRATION_SEED = 0x5EED_CA11


@dataclass(frozen=True)
class ModelConstants:
    k_dt: float = 1751104481578590.5
    b_dt: float = 15.0
    t_ox_nominal: float = 2.0
    sigma_tox: float = 0.04
    sigma_k: float = 0.05
    alpha_t: float = 0.0005
    f_gs: float = 0.05
    f_gd: float = 0.05
    f_gcs: float = 0.42
    f_gcd: float = 0.42
    f_gb: float = 0.06
    device_area: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise InvalidInputError(f"{f.name} must be finite, got {v}")
        fr = self.fractions
        if min(fr) < 0:
            raise InvalidInputError("leakage fractions must be non-negative")
        if abs(sum(fr) - 1.0) > 1e-12:
            raise InvalidInputError(f"leakage fractions sum to {sum(fr)!r}, not 1")
        if self.f_gcs + self.f_gcd <= self.f_gs + self.f_gd + self.f_gb:
            raise InvalidInputError("gate-channel components must dominate the split")
        if self.sigma_tox < 0 or self.sigma_k < 0:
            raise InvalidInputError("variation sigmas must be non-negative")
        if self.t_ox_nominal <= 0 or self.k_dt <= 0 or self.device_area <= 0:
            raise InvalidInputError("t_ox_nominal, k_dt and device_area must be positive")

    @property
    def fractions(self):
        return (self.f_gs, self.f_gd, self.f_gcs, self.f_gcd, self.f_gb)


@dataclass(frozen=True)
class DeviceInstance:
    t_ox: float
    area: float
    k_local: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t_ox, self.area, self.k_local)):
            raise InvalidInputError("device fields must be finite")
        if self.t_ox <= 0 or self.area <= 0 or self.k_local <= 0:
            raise InvalidInputError("device fields must be positive")


@dataclass(frozen=True)
class Environment:
    """Operating point; ``v2`` follows ``vdd`` unless given explicitly."""

    vdd: float = V_REF
    temperature: float = T_REF
    v2: float = None

    def __post_init__(self):
        if self.v2 is None:
            object.__setattr__(self, "v2", self.vdd)
        for name in ("vdd", "temperature", "v2"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        lo, hi = VDD_RANGE
        if not (lo - 1e-9 <= self.vdd <= hi + 1e-9):
            raise InvalidInputError(f"vdd {self.vdd} outside supported range [{lo}, {hi}]")
        if self.v2 < 0:
            raise InvalidInputError("v2 must be non-negative")


NOMINAL_ENV = Environment()


@dataclass(frozen=True)
class LeakageBreakdown:
    i_gs: float
    i_gd: float
    i_gcs: float
    i_gcd: float
    i_gb: float
    total: float


def leakage_current(t_ox, area, k_local, model, env):
    """Total leakage (pA), vectorized over device parameter arrays."""
    t_ox = np.asarray(t_ox, dtype=np.float64)
    v2 = float(env.v2)
    if v2 <= 0:
        return np.zeros(np.broadcast(t_ox, np.asarray(area), np.asarray(k_local)).shape)
    temp = 1.0 + model.alpha_t * (env.temperature - T_REF)
    with np.errstate(over="ignore", under="ignore"):
        return (np.asarray(k_local) * model.k_dt * np.asarray(area) * (v2 / t_ox) ** 2
                * np.exp(-model.b_dt * t_ox / v2) * temp)


def gate_leakage(device, model, env):
    """Five-component leakage breakdown of one device."""
    total = float(leakage_current(device.t_ox, device.area, device.k_local, model, env))
    if not math.isfinite(total):
        raise InvalidInputError("leakage evaluated to a non-finite value")
    return LeakageBreakdown(*(total * f for f in model.fractions), total=total)


def _device_params(model, seeds):
    """Oxide thickness and current factor for each 64-bit device seed."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    u_t = unit_uniform(derive_many(seeds, 0))
    u_k = unit_uniform(derive_many(seeds, 1))
    mu, sd = model.t_ox_nominal, model.sigma_tox
    if sd > 0:
        # inverse-CDF on the truncated support (0.5, 1.5) * nominal
        lo, hi = ndtr(-0.5 * mu / sd), ndtr(0.5 * mu / sd)
        t_ox = mu + sd * ndtri(lo + u_t * (hi - lo))
        t_ox = np.clip(t_ox, np.nextafter(0.5 * mu, mu), np.nextafter(1.5 * mu, mu))
    else:
        t_ox = np.full(seeds.shape, mu)
    k_local = np.exp(model.sigma_k * ndtri(u_k)) if model.sigma_k > 0 else np.ones(seeds.shape)
    return t_ox, k_local


def sample_device(model, area, seed):
    """Draw one device; identical ``(model, area, seed)`` give identical devices."""
    seed = as_seed(seed)
    if not area > 0:
        raise InvalidInputError("area must be positive")
    t_ox, k_local = _device_params(model, np.array([seed], dtype=np.uint64))
    return DeviceInstance(t_ox=float(t_ox[0]), area=float(area), k_local=float(k_local[0]))


def sample_devices(model, area, seeds):
    """Vectorized :func:`sample_device`; returns ``(t_ox, k_local)`` arrays."""
    return _device_params(model, seeds)


def differential_samples(model, n_pairs, seed=CALIBRATION_SEED, env=NOMINAL_ENV):
    """Monte Carlo draw of I_a - I_b for ``n_pairs`` independent device pairs."""
    idx = np.arange(2 * n_pairs, dtype=np.uint64)
    dev_seeds = derive_seed(as_seed(seed), idx)
    t_ox, k = _device_params(model, dev_seeds)
    i = leakage_current(t_ox, model.device_area, k, model, env)
    return i[0::2] - i[1::2]


def calibrate(target_diff_mean, target_diff_std, model_template=None, *, pairs=200_000,
              seed=CALIBRATION_SEED, rtol=1e-4, max_iter=60):
    """Fit ``k_dt`` so the differential-current spread matches a target.

    Parameters
    ----------
    target_diff_mean : float
        Reported mean of the differential current (pA). The paired-device
        model is symmetric and cannot shift the mean; the value is only
        checked against the tolerance ``0.05 * target_diff_std``.
    target_diff_std : float
        Target standard deviation of ``I_a - I_b`` (pA) at 1.2 V, 35 C.
    model_template : ModelConstants
        Supplies every constant except ``k_dt`` (used as the starting point).

    Returns
    -------
    ModelConstants
        Copy of the template with the fitted ``k_dt``.
    """
    if not (math.isfinite(target_diff_std) and target_diff_std > 0):
        raise InvalidInputError(f"target_diff_std must be positive, got {target_diff_std}")
    model = model_template if model_template is not None else ModelConstants()
    # Common random numbers across iterations make std(k_dt) deterministic.
    k = model.k_dt
    for _ in range(max_iter):
        model = replace(model, k_dt=k)
        d = differential_samples(model, pairs, seed)
        std = float(d.std())
        if not (math.isfinite(std) and std > 0):
            raise CalibrationError("differential spread is zero or non-finite; "
                                   "process variation is disabled")
        ratio = target_diff_std / std
        if abs(ratio - 1.0) <= rtol:
            break
        k *= ratio
    else:
        raise CalibrationError(f"k_dt search did not converge in {max_iter} iterations")
    if abs(float(d.mean())) > 0.05 * target_diff_std:
        raise CalibrationError(f"differential mean {d.mean():.4g} pA exceeds 5% of the target std")
    return model
