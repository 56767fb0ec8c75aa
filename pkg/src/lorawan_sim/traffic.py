"""Per-device Poisson packet arrivals and the traffic-intensity mapping."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_BLOCK = 256


def lambda_from_intensity(traffic_intensity: float, t_tx: float, duty_cycle: float) -> float:
    """Packet rate whose ratio to the duty-cycle-limited frame rate is ``traffic_intensity``."""
    if t_tx <= 0 or duty_cycle <= 0:
        raise ConfigError("t_tx and duty_cycle must be positive")
    return traffic_intensity * duty_cycle / t_tx


def intensity_from_lambda(lambda_pps: float, t_tx: float, duty_cycle: float) -> float:
    return lambda_pps * t_tx / duty_cycle


@dataclass(frozen=True)
class TrafficConfig:
    lambda_pps: float | None = None
    traffic_intensity: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if (self.lambda_pps is None) == (self.traffic_intensity is None):
            raise ConfigError("lambda_pps/traffic_intensity: give exactly one")
        if self.lambda_pps is not None and self.lambda_pps < 0:
            raise ConfigError("lambda_pps: must be >= 0")
        if self.traffic_intensity is not None and not 0.0 <= self.traffic_intensity <= 1.0:
            raise ConfigError("traffic_intensity: must be in [0, 1]")

    def rate(self, t_tx: float, duty_cycle: float) -> float:
        if self.lambda_pps is not None:
            return self.lambda_pps
        return lambda_from_intensity(self.traffic_intensity, t_tx, duty_cycle)


def device_rng(seed: int, stream: int, device_id: int) -> np.random.Generator:
    """Independent PCG64 substream keyed by (seed, stream, device)."""
    ss = np.random.SeedSequence(seed, spawn_key=(stream, device_id))
    return np.random.Generator(np.random.PCG64(ss))


class PoissonSource:
    """Exponential inter-arrival generator; draws in blocks to keep calls cheap."""

    def __init__(self, lambda_pps: float, rng: np.random.Generator) -> None:
        self.lambda_pps = lambda_pps
        self.rng = rng
        self._buf: list[float] = []
        self._i = 0

    def next_arrival(self, prev: float) -> float:
        if self.lambda_pps <= 0:
            return math.inf
        if self._i >= len(self._buf):
            self._buf = self.rng.exponential(1.0 / self.lambda_pps, _BLOCK).tolist()
            self._i = 0
        gap = self._buf[self._i]
        self._i += 1
        return prev + gap
