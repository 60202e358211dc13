"""Run configuration: defaults, a ``key=value`` file, then ``HEIS_*`` environment overrides."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields

from .errors import DomainError

ENV_PREFIX = "HEIS_"
RNG_ALGORITHMS = ("philox", "pcg64", "sfc64", "mt19937")


@dataclass
class Config:
    enum_cells: int = 64  # brute-force partition enumeration, x*y cells
    word_budget: int = 16  # word fibers, maximal word length
    node_budget: int = 5_000_000  # operator expansion memo size
    memo_capacity: int = 20_000_000  # integers held by the count table
    rng: str = "philox"
    seed: int = 20190528
    format: str = "csv"
    precision: int = 30  # decimal digits in rendered ratios
    compute_budget: int = 10_000  # x*y cells per experiment row

    def __post_init__(self):
        if self.rng not in RNG_ALGORITHMS:
            raise DomainError(f"rng must be one of {RNG_ALGORITHMS}, got {self.rng!r}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")
        if self.precision < 20:
            raise DomainError("precision must be at least 20 digits")

    def as_dict(self) -> dict:
        return asdict(self)

    def updated(self, **changes) -> "Config":
        values = self.as_dict()
        values.update({k: v for k, v in changes.items() if v is not None})
        return _coerce(values)


def _coerce(values: dict) -> Config:
    out = {}
    for f in fields(Config):
        if f.name in values:
            raw = values[f.name]
            try:
                out[f.name] = int(raw) if f.type in ("int", int) else str(raw).strip()
            except ValueError as exc:
                raise DomainError(f"config {f.name} expects an integer, got {raw!r}") from exc
    return Config(**out)


def parse_config_text(text: str) -> dict:
    known = {f.name for f in fields(Config)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in known:
            raise DomainError(f"config line {lineno}: expected key=value with a known key, got {line!r}")
        values[key] = value.strip()
    return values


def load_config(path: str | None = None, environ=None) -> Config:
    environ = os.environ if environ is None else environ
    values = {}
    if path:
        with open(path) as fh:
            values.update(parse_config_text(fh.read()))
    for f in fields(Config):
        env = environ.get(ENV_PREFIX + f.name.upper())
        if env is not None:
            values[f.name] = env
    return _coerce(values)
