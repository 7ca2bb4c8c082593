"""Repeated noisy reads of 16 cells: per-cell flip rates and majority agreement.

    python scripts/cell_stability.py --trials 1500 --vdd 1.2
"""
import argparse

import numpy as np

from tunnelpuf.array import Challenge, branch_currents, build_array
from tunnelpuf.crp import golden_response, repeat_evaluate
from tunnelpuf.leakage import Environment
from tunnelpuf.readout import ReadoutConfig

ap = argparse.ArgumentParser()
ap.add_argument("--trials", type=int, default=1500)
ap.add_argument("--vdd", type=float, default=1.2)
ap.add_argument("--temp", type=float, default=35.0)
ap.add_argument("--seed", type=int, default=1)
args = ap.parse_args()

arr = build_array(args.seed)
env = Environment(args.vdd, args.temp)
cfg = ReadoutConfig()
ch = Challenge(np.arange(0, 4096, 256))
golden = golden_response(arr, ch, config=cfg).bits
reads = np.stack([r.bits for r in repeat_evaluate(arr, ch, env, cfg, args.trials, 0)])
i1, i2 = branch_currents(arr, env, ch.codes)
print("code   dI (pA)      golden  flip rate")
for k, code in enumerate(ch.codes):
    print(f"{code:4d} {i1[k] - i2[k]:12.1f}   {golden[k]}     {np.mean(reads[:, k] != golden[k]):.4f}")
majority = (2 * reads.sum(axis=0) > args.trials).astype(np.uint8)
print("majority == golden:", bool(np.array_equal(majority, golden)))
