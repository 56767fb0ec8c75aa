"""LoRa physical layer: airtime, log-distance link budget and sensitivity."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError

VALID_BANDWIDTHS = (125_000, 250_000, 500_000)

# Demodulation SNR floor per spreading factor (dB), standard transceiver figures.
SNR_LIMIT_DB = {7: -7.5, 8: -10.0, 9: -12.5, 10: -15.0, 11: -17.5, 12: -20.0}

THERMAL_NOISE_DBM_HZ = -174.0
MAX_PAYLOAD_BYTES = 255


@dataclass(frozen=True)
class PhyParams:
    """Modulation settings of one LoRa transmission.

    ``coding_rate_num`` is the CR in 4/(4+CR); 4/7 is ``3``.
    """

    sf: int = 12
    bandwidth_hz: int = 125_000
    coding_rate_num: int = 3
    preamble_symbols: int = 8
    explicit_header: bool = True
    crc_on: bool = True
    low_dr_optimize: bool | None = None

    def __post_init__(self) -> None:
        if self.sf not in SNR_LIMIT_DB:
            raise ConfigError(f"sf: {self.sf} not in 7..12")
        if self.bandwidth_hz not in VALID_BANDWIDTHS:
            raise ConfigError(f"bandwidth_hz: {self.bandwidth_hz} not in {VALID_BANDWIDTHS}")
        if not 1 <= self.coding_rate_num <= 4:
            raise ConfigError(f"coding_rate_num: {self.coding_rate_num} not in 1..4")
        if self.preamble_symbols < 0:
            raise ConfigError("preamble_symbols: must be non-negative")
        if self.low_dr_optimize is None:
            # Mandatory above 16 ms symbols (SF11/SF12 at 125 kHz).
            object.__setattr__(self, "low_dr_optimize", symbol_time(self) > 0.016)

    def with_sf(self, sf: int) -> "PhyParams":
        return PhyParams(sf, self.bandwidth_hz, self.coding_rate_num,
                         self.preamble_symbols, self.explicit_header, self.crc_on)


@dataclass(frozen=True)
class LinkBudget:
    """Deterministic log-distance link budget.

    The default reference loss places the reception cliffs at about 2.4 km
    (SF7) and 6.3 km (SF12) for a 14 dBm transmitter at 125 kHz.
    """

    tx_power_dbm: float = 14.0
    path_loss_exponent: float = 3.0
    reference_loss_db: float = 37.0
    reference_distance_m: float = 1.0
    noise_figure_db: float = 6.0

    def __post_init__(self) -> None:
        if self.path_loss_exponent <= 0:
            raise ConfigError("path_loss_exponent: must be > 0")
        if self.reference_distance_m <= 0:
            raise ConfigError("reference_distance_m: must be > 0")


def symbol_time(params: PhyParams) -> float:
    """Duration of one chirp symbol, ``2**sf / bandwidth`` seconds."""
    return (1 << params.sf) / params.bandwidth_hz


def payload_symbols(params: PhyParams, payload_bytes: int) -> int:
    if not 0 <= payload_bytes <= MAX_PAYLOAD_BYTES:
        raise ConfigError(f"payload_bytes: {payload_bytes} not in 0..{MAX_PAYLOAD_BYTES}")
    de = 1 if params.low_dr_optimize else 0
    ih = 0 if params.explicit_header else 1
    crc = 1 if params.crc_on else 0
    num = 8 * payload_bytes - 4 * params.sf + 28 + 16 * crc - 20 * ih
    blocks = math.ceil(num / (4 * (params.sf - 2 * de)))
    return 8 + max(blocks * (params.coding_rate_num + 4), 0)


def airtime(params: PhyParams, payload_bytes: int) -> float:
    """Time on air in seconds of a frame with ``payload_bytes`` of PHY payload."""
    ts = symbol_time(params)
    return (params.preamble_symbols + 4.25 + payload_symbols(params, payload_bytes)) * ts


def path_loss_db(budget: LinkBudget, distance_m: float) -> float:
    """Log-distance path loss; clamps to the reference loss below the reference distance."""
    if distance_m <= budget.reference_distance_m:
        return budget.reference_loss_db
    return budget.reference_loss_db + 10.0 * budget.path_loss_exponent * math.log10(
        distance_m / budget.reference_distance_m
    )


def received_power_dbm(budget: LinkBudget, distance_m: float,
                       tx_power_dbm: float | None = None) -> float:
    tx = budget.tx_power_dbm if tx_power_dbm is None else tx_power_dbm
    return tx - path_loss_db(budget, distance_m)


def sensitivity_dbm(sf: int, bandwidth_hz: int, noise_figure_db: float = 6.0) -> float:
    """Noise floor plus noise figure plus the SF's demodulation SNR limit."""
    try:
        snr = SNR_LIMIT_DB[sf]
    except KeyError:
        raise ConfigError(f"sf: {sf} not in 7..12") from None
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db + snr


def max_range_m(budget: LinkBudget, sf: int, bandwidth_hz: int = 125_000) -> float:
    """Distance at which received power equals sensitivity."""
    margin = budget.tx_power_dbm - budget.reference_loss_db - sensitivity_dbm(
        sf, bandwidth_hz, budget.noise_figure_db)
    if margin <= 0:
        return budget.reference_distance_m
    return budget.reference_distance_m * 10.0 ** (margin / (10.0 * budget.path_loss_exponent))
