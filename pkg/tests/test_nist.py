import itertools
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tunnelpuf import nist
from tunnelpuf.errors import InvalidInputError
from tunnelpuf.nist.sts import _LONGEST_RUN_TABLE

from nist_vectors import EPSILON_PI_100, WORKED, evaluate


def pi_bits(n):
    mp.mp.prec = n + 64
    f, out = mp.pi - 3, "11"
    while len(out) < n:
        f *= 2
        d = int(f)
        out += str(d)
        f -= d
    return out


def test_pi_vector_is_binary_pi():
    assert EPSILON_PI_100 == pi_bits(100)


@pytest.mark.parametrize("name,kwargs,bits,published", WORKED)
def test_worked_examples(name, kwargs, bits, published):
    assert evaluate(name, kwargs, bits) == pytest.approx(published, abs=1e-6)


# --- monobit
def test_monobit_balanced_and_extreme():
    assert nist.monobit("01" * 50).p_value == 1.0
    r = nist.monobit("1" * 100)
    assert r.p_value == pytest.approx(math.erfc(10 / math.sqrt(2)), rel=1e-12)
    assert r.p_value < 1e-22 and not r.passed


# --- block frequency
def test_block_frequency_balanced_blocks():
    r = nist.block_frequency("0101" * 32, 8)
    assert r.parameters["chi2"] == 0 and r.p_value == 1.0


def test_block_frequency_all_zero_fails():
    r = nist.block_frequency("0" * 4096, 128)
    assert r.parameters["chi2"] == 4096 and r.p_value < 1e-100


def test_block_frequency_rejects_oversized_block():
    with pytest.raises(InvalidInputError):
        nist.block_frequency("0101", 5)


# --- runs
def test_runs_alternating():
    r = nist.runs("0101010101")
    assert r.parameters["v_obs"] == 10
    assert r.p_value == pytest.approx(math.erfc(5 / (2 * math.sqrt(20) * 0.25)), rel=1e-12)
    assert r.p_value == pytest.approx(0.00157, abs=1e-5)


def test_runs_prerequisite_failure():
    r = nist.runs("0" * 200)
    assert r.p_value == 0.0 and r.parameters["prerequisite_failed"]


# --- longest run
def longest(block):
    return max((len(list(g)) for k, g in itertools.groupby(block) if k == 1), default=0)


def test_longest_run_probabilities_by_enumeration():
    counts = np.zeros(4)
    for block in itertools.product((0, 1), repeat=8):
        counts[min(max(longest(block), 1), 4) - 1] += 1
    table = dict((m, p) for _, m, _, p in _LONGEST_RUN_TABLE)[8]
    assert np.allclose(counts / 256, table, atol=5e-5)


def test_longest_run_parameters_and_extremes():
    rng = np.random.default_rng(1)
    r = nist.longest_run(rng.integers(0, 2, 4096))
    assert (r.parameters["M"], r.parameters["K"], r.parameters["N"]) == (8, 3, 512)
    assert nist.longest_run("1" * 128).p_value < 1e-10
    with pytest.raises(InvalidInputError):
        nist.longest_run("01" * 60)


def test_longest_run_block_scan_matches_groupby():
    rng = np.random.default_rng(2)
    bits = rng.integers(0, 2, 8 * 64)
    nu = np.zeros(4, int)
    for k in range(64):
        nu[min(max(longest(bits[8 * k: 8 * k + 8]), 1), 4) - 1] += 1
    assert nist.longest_run(bits).parameters["nu"] == nu.tolist()


# --- DFT
def direct_dft_magnitudes(bits):
    x = 2.0 * np.asarray(bits, float) - 1.0
    n = x.size
    k = np.arange(n)
    return np.array([abs(np.sum(x * np.exp(-2j * np.pi * j * k / n))) for j in range(n // 2)])


@pytest.mark.parametrize("n", [2, 10, 64, 100, 256])
def test_dft_magnitudes_match_direct_transform(n):
    bits = np.random.default_rng(n).integers(0, 2, n)
    assert np.allclose(nist.dft_magnitudes(bits), direct_dft_magnitudes(bits), atol=1e-6, rtol=0)


def test_dft_all_zero_64():
    r = nist.dft_test("0" * 64)
    assert r.parameters["n1"] == 31
    d = (31 - 30.4) / math.sqrt(64 * 0.95 * 0.05 / 4)
    assert r.p_value == pytest.approx(math.erfc(d / math.sqrt(2)), rel=1e-12)
    assert r.p_value == pytest.approx(0.49, abs=0.01)


@pytest.mark.parametrize("bits", ["1001010011", EPSILON_PI_100])
def test_dft_p_from_direct_count(bits):
    n = len(bits)
    n1 = int(np.sum(direct_dft_magnitudes([int(c) for c in bits]) < math.sqrt(math.log(20) * n)))
    d = (n1 - 0.95 * n / 2) / math.sqrt(n * 0.95 * 0.05 / 4)
    assert nist.dft_test(bits).p_value == pytest.approx(math.erfc(abs(d) / math.sqrt(2)), abs=1e-12)


def test_dft_pass_rate_on_uniform():
    rng = np.random.default_rng(77)
    passed = [nist.dft_test(rng.integers(0, 2, 4096), alpha=0.01).passed for _ in range(1000)]
    assert np.mean(passed) >= 0.95


def test_dft_rejects_odd_or_short():
    with pytest.raises(InvalidInputError):
        nist.dft_test("011")
    with pytest.raises(InvalidInputError):
        nist.dft_test("0")


# --- serial
def test_serial_constant_sequence():
    r = nist.serial("0" * 4096, 2)
    assert r.p_value < 1e-100


def test_serial_m1_collapses_to_monobit():
    bits = np.random.default_rng(5).integers(0, 2, 1000)
    assert nist.serial(bits, 1).parameters["p1"] == pytest.approx(nist.monobit(bits).p_value,
                                                                  rel=1e-9)


def test_serial_headline_is_min():
    r = nist.serial(np.random.default_rng(6).integers(0, 2, 4096), 2)
    assert r.p_value == min(r.parameters["p1"], r.parameters["p2"])


# --- approximate entropy
def test_approx_entropy_constant():
    r = nist.approx_entropy("1" * 4096, 2)
    assert r.parameters["apen"] == pytest.approx(0.0, abs=1e-15)
    assert r.p_value < 1e-100


def test_approx_entropy_random_beats_periodic():
    rng = np.random.default_rng(8)
    periodic = np.tile([0, 0, 1, 1, 0, 1, 1, 1], 512)
    wins = sum(nist.approx_entropy(rng.integers(0, 2, 4096)).p_value >
               nist.approx_entropy(np.roll(periodic, s)).p_value for s in range(100))
    assert wins > 50


# --- cumulative sums
def test_cusum_alternating():
    r = nist.cumulative_sums("10" * 2048)
    assert r.parameters["z"] == 1 and r.p_value > 0.999


def test_cusum_palindrome_modes_agree():
    half = np.random.default_rng(9).integers(0, 2, 500)
    pal = np.concatenate([half, half[::-1]])
    assert nist.cumulative_sums(pal, "forward").p_value == \
        nist.cumulative_sums(pal, "backward").p_value


def test_cusum_bad_mode():
    with pytest.raises(InvalidInputError):
        nist.cumulative_sums("0101", "sideways")


# --- properties
@settings(max_examples=60, deadline=None)
@given(st.integers(128, 300).flatmap(
    lambda n: st.lists(st.integers(0, 1), min_size=2 * n, max_size=2 * n)))
def test_p_values_in_unit_interval(bits):
    for r in nist.run_sequence(bits):
        assert 0.0 <= r.p_value <= 1.0


def test_rejection_rates_calibrated():
    rng = np.random.default_rng(2000)
    results = [nist.run_sequence(rng.integers(0, 2, 4096), alpha=0.01) for _ in range(2000)]
    names = list(nist.TEST_NAMES)
    stats = {n: [r[k].p_value for r in results] for k, n in enumerate(names)}
    stats["serial_p1"] = [r[5].parameters["p1"] for r in results]
    stats["serial_p2"] = [r[5].parameters["p2"] for r in results]
    stats["cusum_backward"] = [r[7].parameters["p_backward"] for r in results]
    for name, ps in stats.items():
        rate = np.mean(np.asarray(ps) < 0.01)
        assert 0.005 <= rate <= 0.02, (name, rate)


# --- suite
def test_suite_deterministic_and_all_zero():
    rng = np.random.default_rng(10)
    seqs = list(rng.integers(0, 2, (5, 4096)))
    a, b = nist.run_suite(seqs), nist.run_suite(seqs)
    assert a.aggregate() == b.aggregate()
    zero = nist.run_suite(["0" * 4096])
    assert all(not r.passed for r in zero.results[0])
    assert [row[0] for row in zero.aggregate()] == list(nist.TEST_NAMES)


def test_suite_validation():
    with pytest.raises(InvalidInputError):
        nist.run_suite(["0" * 4096, "0" * 100])
    with pytest.raises(InvalidInputError):
        nist.run_suite(["0" * 4096], alpha=0.5)
