"""On-disk formats: ``key = value`` configs, bitstream text files, PBM speckles."""
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import InvalidInputError
from .leakage import Environment, ModelConstants
from .readout import ReadoutConfig
from .seeds import as_seed, derive_seed


class FormatError(ValueError):
    """Malformed config or bitstream file; message names the offending line."""


_SECTIONS = {"model": ModelConstants, "readout": ReadoutConfig, "env": Environment}
_RUN_KEYS = {"arrays": int, "base_seed": int, "bits": int, "trials": int, "noise_seed": int,
             "out_dir": str, "array_seeds": "seeds"}


@dataclass(frozen=True)
class RunConfig:
    model: ModelConstants = field(default_factory=ModelConstants)
    readout: ReadoutConfig = field(default_factory=ReadoutConfig)
    env: Environment = field(default_factory=Environment)
    arrays: int = 20
    base_seed: int = 0
    array_seeds: tuple = None
    bits: int = 4096
    trials: int = 100
    noise_seed: int = 1
    out_dir: str = "."

    def seeds(self):
        if self.array_seeds is not None:
            return list(self.array_seeds)
        return [derive_seed(self.base_seed, i) for i in range(self.arrays)]


def parse_config(text, source="<config>"):
    """Flat ``{dotted_key: raw_string}`` map; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or "." not in key:
            raise FormatError(f"{source}:{lineno}: key must be dotted, e.g. readout.gain_db")
        if key in out:
            raise FormatError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = (value, lineno)
    return out


def _convert(value, kind, where):
    try:
        if kind == "seeds":
            return tuple(as_seed(int(v)) for v in value.split(",") if v.strip())
        return kind(value)
    except ValueError as exc:
        raise FormatError(f"{where}: cannot read {value!r}: {exc}") from None


def load_config(text, source="<config>", base=None):
    """Build a :class:`RunConfig` from config text, overriding ``base`` field by field."""
    cfg = base if base is not None else RunConfig()
    sections = {name: {} for name in _SECTIONS}
    run = {}
    for key, (value, lineno) in parse_config(text, source).items():
        where = f"{source}:{lineno}"
        section, name = key.split(".", 1)
        if section in _SECTIONS:
            known = {f.name for f in fields(_SECTIONS[section])}
            if name not in known:
                raise FormatError(f"{where}: unknown key {key!r}")
            sections[section][name] = _convert(value, float, where)
        elif section == "run" and name in _RUN_KEYS:
            run[name] = _convert(value, _RUN_KEYS[name], where)
        else:
            raise FormatError(f"{where}: unknown key {key!r}")
    try:
        model = replace(cfg.model, **sections["model"])
        readout = replace(cfg.readout, **sections["readout"])
        env_kw = {"vdd": cfg.env.vdd, "temperature": cfg.env.temperature}
        if "v2" in sections["env"] or cfg.env.v2 != cfg.env.vdd:
            env_kw["v2"] = cfg.env.v2
        env_kw.update(sections["env"])
        env = Environment(**env_kw)
    except InvalidInputError as exc:
        raise FormatError(f"{source}: {exc}") from None
    return replace(cfg, model=model, readout=readout, env=env, **run)


def dump_config(cfg, header=()):
    """Serialize a RunConfig; floats use ``repr`` so reloading is exact."""
    lines = [f"# {h}" for h in header]
    for section, obj in (("model", cfg.model), ("readout", cfg.readout), ("env", cfg.env)):
        for f in fields(obj):
            lines.append(f"{section}.{f.name} = {getattr(obj, f.name)!r}")
    for name in ("arrays", "base_seed", "bits", "trials", "noise_seed"):
        lines.append(f"run.{name} = {getattr(cfg, name)}")
    lines.append("run.array_seeds = " + ",".join(str(s) for s in cfg.seeds()))
    return "\n".join(lines) + "\n"


def format_bitstream(rows, header=()):
    lines = [f"# {h}" for h in header]
    lines += ["".join("1" if b else "0" for b in row) for row in rows]
    return "\n".join(lines) + "\n"


def parse_bitstream(text, source="<bitstream>"):
    """Rows of a bitstream file as a ``(lines, bits)`` uint8 matrix."""
    rows, width, in_header = [], None, True
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, 1):
        if line.startswith("#"):
            if not in_header:
                raise FormatError(f"{source}:{lineno}: comment after data lines")
            continue
        in_header = False
        line = line.rstrip("\r")
        bad = set(line) - {"0", "1"}
        if not line or bad:
            what = "empty line" if not line else f"invalid character {sorted(bad)[0]!r}"
            raise FormatError(f"{source}:{lineno}: {what}")
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise FormatError(f"{source}:{lineno}: length {len(line)} differs from {width}")
        rows.append(np.frombuffer(line.encode(), dtype=np.uint8) - ord("0"))
    if not rows:
        raise FormatError(f"{source}: no data lines")
    return np.stack(rows)


def format_pbm(bits, rows=64, cols=64):
    """Plain PBM ('P1'), row-major, 1 = black."""
    b = np.asarray(bits, dtype=np.uint8).reshape(rows, cols)
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in b)
    return f"P1\n{cols} {rows}\n{body}\n"
