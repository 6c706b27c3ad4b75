"""Scenario configuration and deterministic RNG substreams."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    """Raised for invalid scenario parameters or malformed config files."""


_CONFIG_FIELDS = ("K", "M", "N_c", "N_cp", "L_tap", "snr_db", "T", "seed")


@dataclass(frozen=True)
class SystemConfig:
    """All scenario parameters of one simulated link.

    K: user count, M: BS antenna count, N_c: subcarrier count (power of two),
    N_cp: cyclic-prefix length in samples, L_tap: channel tap count,
    snr_db: per-antenna receive SNR in dB, T: boosting iteration count,
    seed: 64-bit RNG seed.
    """

    K: int
    M: int
    N_c: int
    N_cp: int
    L_tap: int
    snr_db: float
    T: int
    seed: int

    def __post_init__(self):
        for name in ("K", "M", "N_c", "L_tap", "T"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {v!r}")
        if self.N_c & (self.N_c - 1) != 0:
            raise ConfigError(f"N_c must be a power of two, got {self.N_c}")
        if not (self.L_tap - 1 <= self.N_cp <= self.N_c):
            raise ConfigError(
                f"N_cp must satisfy L_tap-1 <= N_cp <= N_c, got N_cp={self.N_cp} "
                f"with L_tap={self.L_tap}, N_c={self.N_c}"
            )
        if self.K * self.L_tap > self.N_c:
            raise ConfigError(
                f"K*L_tap must not exceed N_c, got {self.K}*{self.L_tap} > {self.N_c}"
            )
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = set(_CONFIG_FIELDS) - set(data)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        kwargs = dict(data)
        for name in ("K", "M", "N_c", "N_cp", "L_tap", "T", "seed"):
            v = kwargs[name]
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        kwargs["snr_db"] = float(kwargs["snr_db"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path: str | Path) -> "SystemConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config root must be a JSON object in {path}")
        return cls.from_dict(data)


def _tag_word(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag)
    # stable across processes/runs, unlike the builtin salted hash()
    digest = hashlib.blake2b(str(tag).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def substream(seed: int, *tags) -> np.random.Generator:
    """Counter-based RNG substream keyed by (seed, *tags).

    Distinct tag tuples yield statistically independent streams, so
    per-entity generation is order-independent and parallel-safe.
    """
    words = [int(seed)] + [_tag_word(t) for t in tags]
    return np.random.default_rng(np.random.SeedSequence(words))


def noise_variance(cfg: SystemConfig) -> float:
    """Per-component (real/imag) noise variance sigma^2 / 2.

    The complex noise variance is sigma^2 = K * 10**(-snr_db/10): with
    unit-power users and unit-power channels the mean per-antenna received
    signal power is K, so SNR = K / sigma^2 holds by construction.
    """
    sigma2 = cfg.K * 10.0 ** (-cfg.snr_db / 10.0)
    return sigma2 / 2.0
