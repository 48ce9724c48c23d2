"""Run-wide configuration shared by the CLI and the heavier computations."""

from __future__ import annotations

from dataclasses import dataclass, field, fields


@dataclass
class RunConfig:
    """Knobs that trade speed for depth; defaults reproduce the shipped reports.

    precision_bits: binary precision for all certified real arithmetic.
    sieve_memory_cap: max entries held by one unsegmented sieve array.
    euler_cutoff: default prime cutoff for Euler-product evaluation.
    ep_depth: search depth in the exponent-pair tree (word length).
    threads: upper bound on worker parallelism (results never depend on it).
    """

    precision_bits: int = 256
    sieve_memory_cap: int = 2 ** 27
    euler_cutoff: int = 10_000
    ep_depth: int = 6
    out_format: str = "json"
    checkpoint_grid: str = "decades"
    threads: int = 1

    def __post_init__(self) -> None:
        for name in ("precision_bits", "sieve_memory_cap", "euler_cutoff", "threads"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.ep_depth <= 12:
            raise ValueError("ep_depth must be in 1..12 (tree growth guard)")
        if self.out_format not in ("json", "csv"):
            raise ValueError("out_format must be 'json' or 'csv'")


def load_config_file(path: str) -> dict:
    """Parse a KEY=VALUE config file (one pair per line, '#' comments)."""
    values: dict = {}
    known = {f.name: f.type for f in fields(RunConfig)}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected KEY=VALUE")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val if key in ("out_format", "checkpoint_grid") else int(val)
    return values


def merge_config(file_values: dict | None, flag_values: dict) -> RunConfig:
    """Explicit flags win over config-file values, which win over defaults."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    return RunConfig(**merged)
