"""Command-line front end: ``tunnelpuf {gen,metrics,ber-sweep,nist,speckle}``.

Exit codes: 0 success, 2 usage error, 3 data/parse error, 4 numeric failure.
Every command computes its full result before writing any file.
"""
import argparse
import csv
import io
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .array import Challenge, build_array
from .crp import golden_response
from .errors import AddressError, CalibrationError, InvalidInputError
from .formats import (FormatError, RunConfig, dump_config, format_bitstream, format_pbm,
                      load_config, parse_bitstream)
from .metrics import (DEFAULT_TEMPS, DEFAULT_VDDS, ber_sweep, inter_fhd_stats,
                      shannon_entropy, uniformity)
from .nist import TEST_NAMES, run_suite

log = logging.getLogger("tunnelpuf")

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("grid must not be empty")
    return vals


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _load_run_config(path):
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read config {path}: {exc.strerror}") from None
    return load_config(text, source=str(path))


def _check_writable(*paths):
    for p in paths:
        if p is None or p == "-":
            continue
        parent = Path(p).resolve().parent
        if not parent.is_dir() or not os.access(parent, os.W_OK):
            raise UsageError(f"output directory {parent} is not writable")


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _read_bitstream(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_bitstream(text, source=str(path))


def cmd_gen(args):
    cfg = _load_run_config(args.config)
    overrides = {k: v for k, v in (("arrays", args.arrays), ("bits", args.bits),
                                   ("base_seed", args.seed)) if v is not None}
    if "arrays" in overrides or "base_seed" in overrides:
        overrides["array_seeds"] = None
    cfg = replace(cfg, **overrides)
    if cfg.arrays < 1 and cfg.array_seeds is None:
        raise UsageError("--arrays must be >= 1")
    if not 1 <= cfg.bits <= 4096:
        raise UsageError("--bits must be in [1, 4096] for the canonical challenge")
    manifest = args.manifest or (None if args.out in (None, "-") else args.out + ".manifest")
    _check_writable(args.out, manifest)
    challenge = Challenge.full(cfg.bits)
    seeds = cfg.seeds()
    rows = [golden_response(build_array(s, cfg.model), challenge, cfg.env, cfg.readout).bits
            for s in seeds]
    header = [f"tunnelpuf {__version__} golden responses",
              f"arrays={len(seeds)} bits={cfg.bits} base_seed={cfg.base_seed}"]
    _write(args.out, format_bitstream(rows, header))
    if manifest is not None:
        _write(manifest, dump_config(replace(cfg, arrays=len(seeds)),
                                     header=["tunnelpuf gen manifest"]))
    return 0


def cmd_metrics(args):
    _check_writable(args.out)
    m = _read_bitstream(args.input)
    p = uniformity(m.ravel())
    rows = [("arrays", m.shape[0]), ("bits", m.shape[1]),
            ("uniformity", repr(p)), ("entropy", repr(shannon_entropy(p)))]
    if m.shape[0] >= 2:
        st = inter_fhd_stats(list(m))
        rows += [("fhd_pairs", st.pair_count), ("fhd_mean", repr(st.mean)),
                 ("fhd_std", repr(st.std))]
    else:
        rows += [("fhd_pairs", "insufficient arrays"), ("fhd_mean", "insufficient arrays"),
                 ("fhd_std", "insufficient arrays")]
    _write(args.out, _csv(("metric", "value"), rows))
    return 0


def cmd_ber_sweep(args):
    cfg = _load_run_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed, array_seeds=None)
    cfg = replace(cfg, arrays=args.arrays, array_seeds=None)
    trials = args.trials if args.trials is not None else cfg.trials
    noise_seed = args.noise_seed if args.noise_seed is not None else cfg.noise_seed
    if args.no_noise:
        cfg = replace(cfg, readout=replace(cfg.readout, noise_sigma_ref=0.0))
    _check_writable(args.out)
    challenge = Challenge.full(cfg.bits)
    seeds = cfg.seeds()
    per_array = [ber_sweep(build_array(s, cfg.model), challenge, cfg.readout,
                           args.vdd, args.temps, trials, noise_seed) for s in seeds]
    rows = []
    for k, pt in enumerate(per_array[0]):
        mean_ber = float(np.mean([pa[k].ber for pa in per_array]))
        rows.append((repr(pt.vdd), repr(pt.temperature), pt.trials, repr(mean_ber)))
    _write(args.out, _csv(("vdd", "temp_c", "trials", "ber"), rows))
    return 0


def cmd_nist(args):
    if not 0 < args.alpha < 0.5:
        raise UsageError(f"--alpha must lie in (0, 0.5), got {args.alpha}")
    _check_writable(args.out, args.long_out)
    m = _read_bitstream(args.input)
    report = run_suite(list(m), alpha=args.alpha, length=m.shape[1])
    summary = _csv(("test", "sequences", "mean_p", "pass_rate"),
                   [(t, n, repr(mp), repr(pr)) for t, n, mp, pr in report.aggregate()])
    if args.long_out is not None:
        long_rows = [(i, r.test_name, repr(r.p_value), int(r.passed))
                     for i, seq in enumerate(report.results) for r in seq]
        _write(args.long_out, _csv(("sequence", "test", "p_value", "passed"), long_rows))
    _write(args.out, summary)
    return 0


def cmd_speckle(args):
    cfg = _load_run_config(args.config)
    _check_writable(args.out)
    seed = args.seed if args.seed is not None else cfg.seeds()[0]
    bits = golden_response(build_array(seed, cfg.model), Challenge.full(), cfg.env, cfg.readout)
    _write(args.out, format_pbm(bits.bits))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="tunnelpuf", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write golden responses of seeded arrays")
    g.add_argument("--arrays", type=_positive)
    g.add_argument("--bits", type=int)
    g.add_argument("--seed", type=int, help="base seed; array i uses derive_seed(seed, i)")
    g.add_argument("--config")
    g.add_argument("--out", default="-")
    g.add_argument("--manifest", help="default: <out>.manifest")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("metrics", help="uniformity, entropy and inter-array FHD")
    m.add_argument("--input", required=True)
    m.add_argument("--out", default="-")
    m.set_defaults(func=cmd_metrics)

    b = sub.add_parser("ber-sweep", help="BER over a voltage x temperature grid")
    b.add_argument("--config")
    b.add_argument("--vdd", type=_float_list, default=list(DEFAULT_VDDS))
    b.add_argument("--temps", type=_float_list, default=list(DEFAULT_TEMPS))
    b.add_argument("--trials", type=_positive)
    b.add_argument("--arrays", type=_positive, default=5)
    b.add_argument("--seed", type=int, help="base array seed")
    b.add_argument("--noise-seed", type=int)
    b.add_argument("--no-noise", action="store_true", help="force comparator noise to zero")
    b.add_argument("--out", default="-")
    b.set_defaults(func=cmd_ber_sweep)

    n = sub.add_parser("nist", help="SP 800-22 battery on a bitstream file")
    n.add_argument("--input", required=True)
    n.add_argument("--alpha", type=float, default=0.001)
    n.add_argument("--out", default="-")
    n.add_argument("--long-out", help="per-sequence CSV")
    n.set_defaults(func=cmd_nist)

    s = sub.add_parser("speckle", help="64x64 golden response as a plain PBM")
    s.add_argument("--seed", type=int)
    s.add_argument("--config")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_speckle)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (FormatError, AddressError, OSError) as exc:
        print(f"tunnelpuf: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InvalidInputError as exc:
        print(f"tunnelpuf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CalibrationError, ArithmeticError, FloatingPointError) as exc:
        print(f"tunnelpuf: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
