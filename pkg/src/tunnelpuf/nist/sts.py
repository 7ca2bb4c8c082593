"""The eight SP 800-22 tests used for array randomness checks, plus the suite.

Statistics follow the published definitions. Standalone calls accept the
short worked-example inputs; :func:`run_suite` is where the length
requirements for full-array (4096-bit) use are enforced.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from .special import erfc, igamc

DEFAULT_ALPHA = 0.001
SUITE_LENGTH = 4096
TEST_NAMES = ("monobit", "block_frequency", "runs", "longest_run", "dft",
              "serial", "approx_entropy", "cumulative_sums")

# (min n, block length M, category lower..upper run lengths, probabilities)
_LONGEST_RUN_TABLE = (
    (750_000, 10_000, (10, 16), (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
    (6_272, 128, (4, 9), (0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124)),
    (128, 8, (1, 4), (0.2148, 0.3672, 0.2305, 0.1875)),
)


@dataclass(frozen=True)
class TestResult:
    test_name: str
    p_value: float
    alpha: float = DEFAULT_ALPHA
    parameters: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    @property
    def passed(self):
        return self.p_value >= self.alpha


def _as_bits(bits, min_len=1):
    if isinstance(bits, str):
        b = np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
    else:
        b = np.asarray(bits)
    b = b.astype(np.int64).ravel()
    if b.size < min_len:
        raise InvalidInputError(f"sequence of length {b.size} shorter than required {min_len}")
    if b.size and (b.min() < 0 or b.max() > 1):
        raise InvalidInputError("sequence must contain only 0 and 1")
    return b


def _clip(p):
    return min(1.0, max(0.0, float(p)))


def monobit(bits, alpha=DEFAULT_ALPHA):
    b = _as_bits(bits)
    n = b.size
    s = int(2 * b.sum() - n)
    return TestResult("monobit", _clip(erfc(abs(s) / math.sqrt(n) / math.sqrt(2))), alpha,
                      {"n": n, "s_n": s})


def block_frequency(bits, block_size=128, alpha=DEFAULT_ALPHA):
    b = _as_bits(bits)
    m = int(block_size)
    if m < 1 or m > b.size:
        raise InvalidInputError(f"block size {m} must be in [1, n={b.size}]")
    nb = b.size // m
    pi = b[: nb * m].reshape(nb, m).mean(axis=1)
    chi2 = 4.0 * m * float(((pi - 0.5) ** 2).sum())
    return TestResult("block_frequency", _clip(igamc(nb / 2.0, chi2 / 2.0)), alpha,
                      {"M": m, "N": nb, "chi2": chi2})


def runs(bits, alpha=DEFAULT_ALPHA):
    b = _as_bits(bits)
    n = b.size
    pi = b.mean()
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return TestResult("runs", 0.0, alpha, {"pi": float(pi), "prerequisite_failed": True})
    v_obs = 1 + int(np.count_nonzero(b[1:] != b[:-1]))
    q = pi * (1 - pi)
    p = erfc(abs(v_obs - 2 * n * q) / (2 * math.sqrt(2 * n) * q))
    return TestResult("runs", _clip(p), alpha,
                      {"pi": float(pi), "v_obs": v_obs, "prerequisite_failed": False})


def _longest_runs(blocks):
    """Longest run of ones in each row of a 0/1 matrix."""
    best = np.zeros(blocks.shape[0], dtype=np.int64)
    cur = np.zeros_like(best)
    for col in blocks.T:
        cur = (cur + 1) * col
        np.maximum(best, cur, out=best)
    return best


def longest_run(bits, alpha=DEFAULT_ALPHA):
    b = _as_bits(bits, min_len=128)
    n = b.size
    m, (lo, hi), probs = next((m, r, p) for nmin, m, r, p in _LONGEST_RUN_TABLE if n >= nmin)
    nb = n // m
    runs_ = np.clip(_longest_runs(b[: nb * m].reshape(nb, m)), lo, hi)
    nu = np.bincount(runs_ - lo, minlength=hi - lo + 1)
    pi = np.asarray(probs)
    chi2 = float((((nu - nb * pi) ** 2) / (nb * pi)).sum())
    k = len(probs) - 1
    return TestResult("longest_run", _clip(igamc(k / 2.0, chi2 / 2.0)), alpha,
                      {"M": m, "K": k, "N": nb, "nu": nu.tolist(), "chi2": chi2})


def dft_magnitudes(bits):
    """|DFT| of the +/-1 sequence, first n/2 coefficients."""
    x = 2.0 * _as_bits(bits) - 1.0
    return np.abs(np.fft.fft(x)[: x.size // 2])


def dft_test(bits, alpha=DEFAULT_ALPHA):
    b = _as_bits(bits, min_len=2)
    n = b.size
    if n % 2:
        raise InvalidInputError("dft test needs an even-length sequence")
    mags = dft_magnitudes(b)
    threshold = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2.0
    n1 = int(np.count_nonzero(mags < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return TestResult("dft", _clip(erfc(abs(d) / math.sqrt(2))), alpha,
                      {"threshold": threshold, "n0": n0, "n1": n1, "d": d})


def _psi2(b, m):
    """psi^2_m over overlapping m-bit patterns with wraparound."""
    if m <= 0:
        return 0.0
    n = b.size
    ext = np.concatenate([b, b[: m - 1]])
    codes = np.zeros(n, dtype=np.int64)
    for j in range(m):
        codes = (codes << 1) | ext[j: j + n]
    counts = np.bincount(codes, minlength=1 << m)
    return float((counts.astype(np.float64) ** 2).sum() * (1 << m) / n - n)


def serial(bits, m=2, alpha=DEFAULT_ALPHA):
    """Serial test; headline p-value is the smaller of the two."""
    b = _as_bits(bits)
    if not 1 <= m < b.size:
        raise InvalidInputError(f"block length m={m} must be in [1, n)")
    psi = [_psi2(b, m - k) for k in range(3)]
    # roundoff can push an exact zero slightly negative
    d1 = max(psi[0] - psi[1], 0.0)
    d2 = max(psi[0] - 2 * psi[1] + psi[2], 0.0)
    p1 = _clip(igamc(2.0 ** (m - 2), d1 / 2.0))
    p2 = _clip(igamc(2.0 ** (m - 3), d2 / 2.0))
    return TestResult("serial", min(p1, p2), alpha,
                      {"m": m, "psi2": psi, "del1": d1, "del2": d2, "p1": p1, "p2": p2})


def _phi(b, m):
    if m == 0:
        return 0.0
    n = b.size
    ext = np.concatenate([b, b[: m - 1]])
    codes = np.zeros(n, dtype=np.int64)
    for j in range(m):
        codes = (codes << 1) | ext[j: j + n]
    c = np.bincount(codes, minlength=1 << m)
    c = c[c > 0] / n
    return float((c * np.log(c)).sum())


def approx_entropy(bits, m=2, alpha=DEFAULT_ALPHA):
    b = _as_bits(bits)
    n = b.size
    if not 1 <= m < n:
        raise InvalidInputError(f"block length m={m} must be in [1, n)")
    apen = _phi(b, m) - _phi(b, m + 1)
    chi2 = max(2.0 * n * (math.log(2) - apen), 0.0)
    return TestResult("approx_entropy", _clip(igamc(2.0 ** (m - 1), chi2 / 2.0)), alpha,
                      {"m": m, "apen": apen, "chi2": chi2})


def _phi_cdf(x):
    return 0.5 * erfc(-x / math.sqrt(2))


def _cusum_p(n, z):
    sq = math.sqrt(n)
    s1 = sum(_phi_cdf((4 * k + 1) * z / sq) - _phi_cdf((4 * k - 1) * z / sq)
             for k in range(int((-n / z + 1) / 4), int((n / z - 1) / 4) + 1))
    s2 = sum(_phi_cdf((4 * k + 3) * z / sq) - _phi_cdf((4 * k + 1) * z / sq)
             for k in range(int((-n / z - 3) / 4), int((n / z - 1) / 4) + 1))
    return _clip(1.0 - s1 + s2)


def cumulative_sums(bits, mode="forward", alpha=DEFAULT_ALPHA):
    b = _as_bits(bits)
    if mode not in ("forward", "backward"):
        raise InvalidInputError(f"mode must be 'forward' or 'backward', got {mode!r}")
    x = 2 * b - 1
    if mode == "backward":
        x = x[::-1]
    z = int(np.abs(np.cumsum(x)).max())
    return TestResult("cumulative_sums", _cusum_p(b.size, z), alpha, {"mode": mode, "z": z})


@dataclass
class NistReport:
    alpha: float
    results: list  # one list of TestResult per input sequence, in TEST_NAMES order

    @property
    def sequence_count(self):
        return len(self.results)

    def pass_rate(self, name):
        k = TEST_NAMES.index(name)
        return sum(r[k].passed for r in self.results) / len(self.results)

    def mean_p(self, name):
        k = TEST_NAMES.index(name)
        return float(np.mean([r[k].p_value for r in self.results]))

    def aggregate(self):
        return [(name, self.sequence_count, self.mean_p(name), self.pass_rate(name))
                for name in TEST_NAMES]


def run_sequence(bits, alpha=DEFAULT_ALPHA):
    """All eight tests on one sequence with the full-array parameters."""
    b = _as_bits(bits)
    fwd = cumulative_sums(b, "forward", alpha)
    bwd = cumulative_sums(b, "backward", alpha)
    cusum = TestResult("cumulative_sums", fwd.p_value, alpha,
                       {"z_forward": fwd.parameters["z"], "z_backward": bwd.parameters["z"],
                        "p_forward": fwd.p_value, "p_backward": bwd.p_value})
    return [monobit(b, alpha), block_frequency(b, 128, alpha), runs(b, alpha),
            longest_run(b, alpha), dft_test(b, alpha), serial(b, 2, alpha),
            approx_entropy(b, 2, alpha), cusum]


def run_suite(sequences, alpha=DEFAULT_ALPHA, length=SUITE_LENGTH):
    if not 0 < alpha < 0.5:
        raise InvalidInputError(f"alpha must lie in (0, 0.5), got {alpha}")
    seqs = [_as_bits(s) for s in sequences]
    if not seqs:
        raise InvalidInputError("run_suite needs at least one sequence")
    if any(s.size != length for s in seqs):
        raise InvalidInputError(f"every sequence must have length {length}")
    return NistReport(alpha, [run_sequence(s, alpha) for s in seqs])
