from .special import erfc, igam, igamc
from .sts import (TEST_NAMES, NistReport, TestResult, approx_entropy, block_frequency,
                  cumulative_sums, dft_magnitudes, dft_test, longest_run, monobit, run_sequence,
                  run_suite, runs, serial)
