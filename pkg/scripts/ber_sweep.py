"""Voltage and temperature BER sweeps averaged over seeded arrays.

    python scripts/ber_sweep.py --arrays 5 --trials 100 > ber.csv
"""
import argparse
import sys

import numpy as np

from tunnelpuf.array import Challenge, build_array
from tunnelpuf.metrics import DEFAULT_TEMPS, DEFAULT_VDDS, ber_sweep
from tunnelpuf.readout import ReadoutConfig
from tunnelpuf.seeds import derive_seed

ap = argparse.ArgumentParser()
ap.add_argument("--arrays", type=int, default=5)
ap.add_argument("--trials", type=int, default=100)
ap.add_argument("--seed", type=int, default=0)
args = ap.parse_args()

ch = Challenge.full()
cfg = ReadoutConfig()
temps = sorted(set(DEFAULT_TEMPS) | {35.0})
grids = [ber_sweep(build_array(derive_seed(args.seed, i)), ch, cfg, DEFAULT_VDDS, temps,
                   args.trials, 1) for i in range(args.arrays)]
print("vdd,temp_c,ber")
for k, pt in enumerate(grids[0]):
    print(f"{pt.vdd},{pt.temperature},{np.mean([g[k].ber for g in grids]):.6g}")
print(f"# {args.arrays} arrays x {args.trials} trials", file=sys.stderr)
