"""Scenario configuration: validation, flat key-value files and overrides."""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .frames import TxMode
from .phy import LinkBudget, PhyParams, airtime

DEFAULT_DURATION_S = 86_400.0
DEFAULT_DITHER_S = 2.0


class Scenario(str, Enum):
    SINGLE_DEVICE_MOBILITY = "single_device_mobility"
    MULTI_DEVICE_POISSON = "multi_device_poisson"


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters of one simulation run."""

    scenario: Scenario = Scenario.MULTI_DEVICE_POISSON
    device_count: int = 1
    disc_radius_m: float = 5000.0
    distance_m: float = 1000.0
    sf: int = 12
    tx_mode: TxMode = TxMode.UNCONFIRMED
    max_tx: int = 1
    m_c: int = 1
    traffic_intensity: float | None = None
    lambda_pps: float | None = None
    packets_per_point: int = 100
    seed: int = 0
    duration_s: float | None = None
    ul_duty_cycle: float = 0.01
    dl_duty_cycle: float = 0.10
    payload_bytes: int = 21
    ack_payload_bytes: int = 12
    bandwidth_hz: int = 125_000
    coding_rate_num: int = 3
    preamble_symbols: int = 8
    tx_power_dbm: float = 14.0
    gw_tx_power_dbm: float = 14.0
    path_loss_exponent: float = 3.0
    reference_loss_db: float = 37.0
    noise_figure_db: float = 6.0
    capture_threshold_db: float = 0.0
    recv_delay1_s: float = 1.0
    tx_dither_s: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        object.__setattr__(self, "tx_mode", TxMode(self.tx_mode))
        problems = self._problems()
        if problems:
            raise ConfigError("; ".join(problems))

    def _problems(self) -> list[str]:
        p = []
        if self.device_count < 1:
            p.append("device_count: must be >= 1")
        if not 7 <= self.sf <= 12:
            p.append(f"sf: {self.sf} not in 7..12")
        if self.max_tx < 1:
            p.append("max_tx: must be >= 1")
        if not 1 <= self.m_c <= 7:
            p.append(f"m_c: {self.m_c} not in 1..7")
        if self.duration_s is not None and self.duration_s < 0:
            p.append("duration_s: must be >= 0")
        for name in ("ul_duty_cycle", "dl_duty_cycle"):
            if not 0.0 < getattr(self, name) <= 1.0:
                p.append(f"{name}: not in (0, 1]")
        if self.bandwidth_hz not in (125_000, 250_000, 500_000):
            p.append(f"bandwidth_hz: {self.bandwidth_hz} unsupported")
        if not 0 <= self.payload_bytes <= 255 or not 0 <= self.ack_payload_bytes <= 255:
            p.append("payload_bytes/ack_payload_bytes: not in 0..255")
        if self.capture_threshold_db < 0:
            p.append("capture_threshold_db: must be >= 0")
        if self.tx_dither_s is not None and self.tx_dither_s < 0:
            p.append("tx_dither_s: must be >= 0")
        if self.path_loss_exponent <= 0:
            p.append("path_loss_exponent: must be > 0")
        if self.scenario is Scenario.SINGLE_DEVICE_MOBILITY:
            if self.device_count != 1:
                p.append("device_count: single_device_mobility uses exactly 1 device")
            if self.distance_m <= 0:
                p.append("distance_m: must be > 0")
            if self.packets_per_point < 1:
                p.append("packets_per_point: must be >= 1")
            if self.traffic_intensity is not None or self.lambda_pps is not None:
                p.append("traffic_intensity/lambda_pps: single_device_mobility is saturated")
        else:
            if self.disc_radius_m <= 0:
                p.append("disc_radius_m: must be > 0")
            if (self.traffic_intensity is None) == (self.lambda_pps is None):
                p.append("traffic_intensity/lambda_pps: give exactly one")
            if self.traffic_intensity is not None and not 0 <= self.traffic_intensity <= 1:
                p.append("traffic_intensity: not in [0, 1]")
            if self.lambda_pps is not None and self.lambda_pps < 0:
                p.append("lambda_pps: must be >= 0")
        return p

    # -- derived -----------------------------------------------------------

    @property
    def phy(self) -> PhyParams:
        return PhyParams(self.sf, self.bandwidth_hz, self.coding_rate_num, self.preamble_symbols)

    @property
    def link_budget(self) -> LinkBudget:
        return LinkBudget(self.tx_power_dbm, self.path_loss_exponent, self.reference_loss_db,
                          1.0, self.noise_figure_db)

    @property
    def t_tx(self) -> float:
        return airtime(self.phy, self.payload_bytes)

    @property
    def lambda_effective(self) -> float | None:
        if self.lambda_pps is not None:
            return self.lambda_pps
        if self.traffic_intensity is not None:
            return self.traffic_intensity * self.ul_duty_cycle / self.t_tx
        return None

    @property
    def t_i(self) -> float | None:
        if self.traffic_intensity is not None:
            return self.traffic_intensity
        if self.lambda_pps is not None:
            return self.lambda_pps * self.t_tx / self.ul_duty_cycle
        return None

    @property
    def dither(self) -> float:
        """Random delay bound on duty-deferred starts; breaks lockstep between
        saturated devices, which all repeat with the same period."""
        if self.tx_dither_s is not None:
            return self.tx_dither_s
        if self.scenario is Scenario.SINGLE_DEVICE_MOBILITY:
            return 0.0
        return DEFAULT_DITHER_S

    @property
    def duration(self) -> float:
        if self.duration_s is not None:
            return self.duration_s
        if self.scenario is Scenario.SINGLE_DEVICE_MOBILITY:
            return self.packets_per_point * self.t_tx / self.ul_duty_cycle
        return DEFAULT_DURATION_S

    def replace(self, **changes: Any) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


_OPTIONAL = ("traffic_intensity", "lambda_pps", "duration_s", "tx_dither_s")
FIELD_NAMES = tuple(f.name for f in fields(ScenarioConfig))
_FIELD_TYPES = {
    "scenario": Scenario, "tx_mode": TxMode,
    "traffic_intensity": float, "lambda_pps": float, "duration_s": float,
    "tx_dither_s": float,
}
for _f in fields(ScenarioConfig):
    if _f.name not in _FIELD_TYPES:
        _FIELD_TYPES[_f.name] = type(_f.default)


def parse_value(name: str, text: str) -> Any:
    """Coerce a textual value for field ``name``; ``none`` clears optional fields."""
    if name not in _FIELD_TYPES:
        raise ConfigError(f"{name}: unknown key")
    text = text.strip()
    if text.lower() in ("none", "") and name in _OPTIONAL:
        return None
    kind = _FIELD_TYPES[name]
    try:
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        return kind(text.lower())
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {text!r}") from None


def parse_values(name: str, text: str) -> list[Any]:
    """Comma-separated list form, used for sweep axes."""
    return [parse_value(name, part) for part in text.split(",")]


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file (``#`` comments). Unknown keys are rejected."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    text = Path(path).read_text()
    try:
        parser.read_string("[run]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raw = dict(parser["run"])
    unknown = sorted(set(raw) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    return raw


def config_from_mapping(values: Mapping[str, Any], base: ScenarioConfig | None = None
                        ) -> ScenarioConfig:
    unknown = sorted(set(values) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    coerced = {k: parse_value(k, v) if isinstance(v, str) else v for k, v in values.items()}
    if base is None:
        return ScenarioConfig(**coerced)
    return dataclasses.replace(base, **coerced)
