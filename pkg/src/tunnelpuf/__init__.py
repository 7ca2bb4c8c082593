"""Behavioral simulator and evaluation toolkit for gate-tunneling-leakage PUF arrays."""
__version__ = "0.1.0"

from .array import (CellAddress, Challenge, PufArray, PufCell, Response, build_array,
                    decode_address, select_cell)
from .crp import evaluate_challenge, golden_response, repeat_evaluate
from .leakage import (NOMINAL_ENV, DeviceInstance, Environment, LeakageBreakdown,
                      ModelConstants, calibrate, gate_leakage, sample_device)
from .readout import ReadoutConfig, read_bit
