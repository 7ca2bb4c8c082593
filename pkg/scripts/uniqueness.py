"""Inter-array FHD, pooled uniformity and entropy over seeded arrays.

    python scripts/uniqueness.py --arrays 20 --seed 7
"""
import argparse

import numpy as np

from tunnelpuf.array import Challenge, build_array
from tunnelpuf.crp import golden_response
from tunnelpuf.metrics import inter_fhd_stats, shannon_entropy, uniformity
from tunnelpuf.seeds import derive_seed

ap = argparse.ArgumentParser()
ap.add_argument("--arrays", type=int, default=20)
ap.add_argument("--seed", type=int, default=7)
args = ap.parse_args()

ch = Challenge.full()
golden = [golden_response(build_array(derive_seed(args.seed, i)), ch) for i in range(args.arrays)]
st = inter_fhd_stats(golden)
p = uniformity(np.concatenate([g.bits for g in golden]))
print(f"pairs          {st.pair_count}")
print(f"FHD mean/std   {st.mean:.4f} / {st.std:.6f}")
print(f"ones fraction  {p:.4f}")
print(f"entropy        {shannon_entropy(p):.7f}")
