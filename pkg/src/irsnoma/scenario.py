"""Scenario parameters, unit conversion and the outage thresholds.

Powers are given in dBm and noise is carried explicitly, so every formula
downstream works with the noise-normalised transmit SNR ``P / sigma^2``. A
single ``tx_power_dbm`` serves the source, the relay and the IRS-OMA
transmitter alike.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """Invalid scenario configuration."""


def dbm_to_linear(p_dbm):
    """Convert a power in dBm to milliwatts."""
    return 10.0 ** (p_dbm / 10.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """Geometry, rates, power split and array size of one experiment.

    Distances are in metres, rates in bits per channel use and powers in dBm.
    ``c1_sq``/``c2_sq`` are the NOMA power fractions of the far user U1 and
    the near user U2.
    """

    d2: float = 20.0
    dr: float = 20.0
    dr1: float = 10.0
    dr2: float = 10.0
    d12: float = 10.0
    alpha: float = 4.0
    c1_sq: float = 0.8
    c2_sq: float = 0.2
    R1: float = 1.8
    R2: float = 1.0
    N: int = 16
    Q: int = 1
    tx_power_dbm: float = 30.0
    noise_power_dbm: float = -70.0

    def __post_init__(self):
        for name in ("d2", "dr", "dr1", "dr2", "d12"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive distance, got {value!r}")
        if not self.alpha >= 2:
            raise ConfigError(f"alpha must be >= 2, got {self.alpha!r}")
        for name in ("N", "Q"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if not (self.c1_sq >= self.c2_sq > 0):
            raise ConfigError("power split must satisfy c1_sq >= c2_sq > 0")
        if abs(self.c1_sq + self.c2_sq - 1.0) > 1e-9:
            raise ConfigError("power split must satisfy c1_sq + c2_sq = 1")
        if not (self.R1 > 0 and self.R2 > 0):
            raise ConfigError("target rates R1 and R2 must be positive")
        for name in ("tx_power_dbm", "noise_power_dbm"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    @property
    def snr_linear(self) -> float:
        return dbm_to_linear(self.tx_power_dbm) / dbm_to_linear(self.noise_power_dbm)

    @property
    def reflect_loss_u1(self) -> float:
        """Path-loss product ``dr^alpha * dr1^alpha`` of the U1 reflected link."""
        return self.dr**self.alpha * self.dr1**self.alpha

    @property
    def reflect_loss_u2(self) -> float:
        return self.dr**self.alpha * self.dr2**self.alpha

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a flat key-value object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class DerivedThresholds:
    """Thresholds on ``|xi_N|^2`` that define outage at one power level.

    ``eps1`` (IRS-NOMA) is ``inf`` when the power split cannot support R1,
    which makes the outage event certain.
    """

    eps: float
    eps1: float
    eps2: float
    snr_linear: float
    feasible: bool


def derive_thresholds(cfg: ScenarioConfig) -> DerivedThresholds:
    snr = cfg.snr_linear
    eps = 2.0**cfg.R1 - 1.0
    margin = cfg.c1_sq - eps * cfg.c2_sq
    feasible = margin > 0
    eps1 = cfg.reflect_loss_u1 * eps / (snr * margin) if feasible else math.inf
    eps2 = cfg.reflect_loss_u1 * (2.0 ** (2.0 * cfg.R1) - 1.0) / snr
    return DerivedThresholds(eps=eps, eps1=eps1, eps2=eps2, snr_linear=snr, feasible=feasible)


def paper_default_scenario(**overrides) -> ScenarioConfig:
    """Default geometry, rates and power split used by the figure presets."""
    return ScenarioConfig(**overrides)
