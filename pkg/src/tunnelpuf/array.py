"""64x64 arrays of two-device leakage cells and address decoding.

Device seeds: ``derive_seed(array_seed, (row * 64 + col) * 2 + branch)``.
Because the child index is injective in (row, col, branch) and the hash is a
bijection, no two devices of an array share a seed.
"""
from dataclasses import dataclass

import numpy as np

from .errors import AddressError
from .leakage import (DeviceInstance, ModelConstants, gate_leakage, leakage_current,
                      sample_devices)
from .seeds import as_seed, derive_seed

ROWS = COLS = 64
N_CELLS = ROWS * COLS


@dataclass(frozen=True)
class CellAddress:
    row: int
    col: int

    def __post_init__(self):
        if not (0 <= self.row < ROWS and 0 <= self.col < COLS):
            raise AddressError(f"cell ({self.row}, {self.col}) outside {ROWS}x{COLS} array")

    @property
    def code(self):
        return (self.row << 6) | self.col


@dataclass(frozen=True)
class PufCell:
    device_a: DeviceInstance
    device_b: DeviceInstance


def _check_codes(codes):
    codes = np.asarray(codes)
    if codes.size and (not np.issubdtype(codes.dtype, np.integer)
                       or codes.min() < 0 or codes.max() >= N_CELLS):
        raise AddressError(f"address codes must be integers in [0, {N_CELLS - 1}]")
    return codes.astype(np.int64)


class Challenge:
    """Ordered address codes; bit k of the response answers code k."""

    def __init__(self, codes):
        codes = np.atleast_1d(np.asarray(codes))
        if codes.ndim != 1 or codes.size < 1:
            raise AddressError("a challenge needs at least one address code")
        self.codes = _check_codes(codes)
        self.codes.flags.writeable = False

    @classmethod
    def full(cls, n=N_CELLS):
        """Canonical whole-array challenge: codes ``0 .. n-1`` ascending."""
        if not 1 <= n <= N_CELLS:
            raise AddressError(f"canonical challenge length must be in [1, {N_CELLS}]")
        return cls(np.arange(n))

    def __len__(self):
        return self.codes.size

    def __eq__(self, other):
        return isinstance(other, Challenge) and np.array_equal(self.codes, other.codes)

    def __repr__(self):
        return f"Challenge(n={len(self)})"


class Response:
    def __init__(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1 or bits.size < 1 or bits.max() > 1:
            raise ValueError("response bits must be a non-empty 1-D sequence of 0/1")
        self.bits = bits
        self.bits.flags.writeable = False

    def __len__(self):
        return self.bits.size

    def __eq__(self, other):
        return isinstance(other, Response) and np.array_equal(self.bits, other.bits)

    def __str__(self):
        return "".join("1" if b else "0" for b in self.bits)

    def __repr__(self):
        s = str(self)
        return f"Response({s[:32]}{'...' if len(s) > 32 else ''})"


@dataclass(frozen=True, eq=False)
class PufArray:
    """Immutable array state; ``t_ox`` and ``k_local`` have shape (64, 64, 2)."""

    array_seed: int
    model: ModelConstants
    t_ox: np.ndarray
    k_local: np.ndarray

    def cell(self, addr):
        a, b = (DeviceInstance(float(self.t_ox[addr.row, addr.col, br]), self.model.device_area,
                               float(self.k_local[addr.row, addr.col, br])) for br in (0, 1))
        return PufCell(a, b)

    @property
    def cells(self):
        return [[self.cell(CellAddress(r, c)) for c in range(COLS)] for r in range(ROWS)]


def device_seeds(array_seed):
    """Per-device seeds, shape (64, 64, 2), indexed [row, col, branch]."""
    idx = np.arange(N_CELLS * 2, dtype=np.uint64)
    return derive_seed(as_seed(array_seed), idx).reshape(ROWS, COLS, 2)


def build_array(array_seed, model=None):
    model = model if model is not None else ModelConstants()
    array_seed = as_seed(array_seed)
    t_ox, k_local = sample_devices(model, model.device_area, device_seeds(array_seed))
    t_ox.flags.writeable = False
    k_local.flags.writeable = False
    return PufArray(array_seed, model, t_ox, k_local)


def decode_address(code):
    """Split a 12-bit code into row (high 6 bits) and column (low 6 bits)."""
    if isinstance(code, bool) or not isinstance(code, (int, np.integer)):
        raise AddressError(f"address code must be an integer, got {code!r}")
    if not 0 <= code < N_CELLS:
        raise AddressError(f"address code {code} outside [0, {N_CELLS - 1}]")
    return CellAddress(int(code) >> 6, int(code) & 0x3F)


def branch_currents(array, env, codes=None):
    """``(i_o1, i_o2)`` in pA for the given codes (all cells, row-major, if None)."""
    i = leakage_current(array.t_ox, array.model.device_area, array.k_local, array.model, env)
    i = i.reshape(N_CELLS, 2)
    if codes is not None:
        i = i[_check_codes(codes)]
    return i[:, 0], i[:, 1]


def select_cell(array, addr, env):
    """Ideal selection: only the addressed cell drives the two outputs."""
    if not isinstance(addr, CellAddress):
        raise AddressError(f"expected a CellAddress, got {addr!r}")
    cell = array.cell(addr)
    return (gate_leakage(cell.device_a, array.model, env).total,
            gate_leakage(cell.device_b, array.model, env).total)
