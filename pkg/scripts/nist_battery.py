"""SP 800-22 battery over many simulated arrays (default 700).

    python scripts/nist_battery.py --arrays 700
"""
import argparse

from tunnelpuf import nist
from tunnelpuf.array import Challenge, build_array
from tunnelpuf.crp import golden_response
from tunnelpuf.seeds import derive_seed

ap = argparse.ArgumentParser()
ap.add_argument("--arrays", type=int, default=700)
ap.add_argument("--seed", type=int, default=700)
ap.add_argument("--alpha", type=float, default=0.001)
args = ap.parse_args()

ch = Challenge.full()
seqs = [golden_response(build_array(derive_seed(args.seed, i)), ch).bits for i in range(args.arrays)]
report = nist.run_suite(seqs, alpha=args.alpha)
print(f"{'test':<18}{'mean p':>10}{'pass %':>10}")
for name, _, mean_p, rate in report.aggregate():
    print(f"{name:<18}{mean_p:>10.4f}{100 * rate:>10.2f}")
serial_p1 = sum(r[5].parameters["p1"] for r in report.results) / len(seqs)
serial_p2 = sum(r[5].parameters["p2"] for r in report.results) / len(seqs)
print(f"serial p1 / p2 mean: {serial_p1:.4f} / {serial_p2:.4f}")
