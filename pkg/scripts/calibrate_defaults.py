"""Recompute the calibrated constants frozen into ModelConstants / ReadoutConfig.

    python scripts/calibrate_defaults.py [--arrays 5] [--seed 0]

Fits k_dt to the differential-current spread of 8411.84 pA, then solves for
the comparator noise that gives a 0.049316 BER at 0.9 V / 35 C, and prints
both as config lines.
"""
import argparse
from dataclasses import replace

from tunnelpuf.array import Challenge, build_array
from tunnelpuf.leakage import ModelConstants, calibrate, differential_samples
from tunnelpuf.metrics import STRESS_ENV, calibrate_noise_sigma, expected_ber
from tunnelpuf.readout import ReadoutConfig
from tunnelpuf.seeds import derive_seed


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--arrays", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    model = calibrate(28.1986, 8411.84, ModelConstants())
    d = differential_samples(model, 10_000, seed=1)
    print(f"# fresh 10k pairs: mean {d.mean():.2f} pA, std {d.std():.2f} pA")
    print(f"model.k_dt = {model.k_dt!r}")

    arrays = [build_array(derive_seed(args.seed, i), model) for i in range(args.arrays)]
    ch = Challenge.full()
    sigma = calibrate_noise_sigma(arrays, ch, ReadoutConfig())
    cfg = replace(ReadoutConfig(), noise_sigma_ref=sigma)
    print(f"# expected BER at stress point: {expected_ber(arrays, ch, cfg, STRESS_ENV):.6f}")
    print(f"readout.noise_sigma_ref = {sigma!r}")


if __name__ == "__main__":
    main()
