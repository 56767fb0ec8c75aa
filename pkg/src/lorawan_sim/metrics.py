"""Run ledger, sub-band load/utilization, PDR, throughput and the rate oracle."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class DeviceRecord:
    app_generated: int = 0
    # Application packets whose first MAC transmission started.
    app_sent: int = 0
    app_delivered: int = 0
    mac_sent: int = 0
    mac_sent_airtime: float = 0.0
    mac_received: int = 0
    mac_received_airtime: float = 0.0
    payload_bits_delivered: int = 0
    acks_received: int = 0


@dataclass
class MetricsLedger:
    duration: float
    m_c: int
    delta: float
    devices: list[DeviceRecord] = field(default_factory=list)
    acks_sent: int = 0

    def totals(self) -> DeviceRecord:
        tot = DeviceRecord()
        for rec in self.devices:
            for name, value in vars(rec).items():
                setattr(tot, name, getattr(tot, name) + value)
        return tot


def _require_duration(ledger: MetricsLedger) -> float:
    if ledger.duration <= 0:
        raise ConfigError("duration: metrics undefined for T <= 0")
    return ledger.duration


def sub_band_load(ledger: MetricsLedger) -> float:
    """Offered airtime per channel-second over the run."""
    T = _require_duration(ledger)
    return sum(d.mac_sent_airtime for d in ledger.devices) / (ledger.m_c * T)


def sub_band_utilization(ledger: MetricsLedger) -> float:
    """Airtime of received uplink frames per channel-second; duplicates count."""
    T = _require_duration(ledger)
    return sum(d.mac_received_airtime for d in ledger.devices) / (ledger.m_c * T)


def pdr(ledger: MetricsLedger) -> float:
    ratios = [d.app_delivered / d.app_sent for d in ledger.devices if d.app_sent > 0]
    skipped = len(ledger.devices) - len(ratios)
    if skipped:
        logger.warning("pdr: %d device(s) sent no packets and are excluded", skipped)
    if not ratios:
        return float("nan")
    return sum(ratios) / len(ratios)


def ul_throughput_bps(ledger: MetricsLedger) -> float:
    T = _require_duration(ledger)
    return sum(d.payload_bits_delivered for d in ledger.devices) / T


def saturation_lambda(t_tx: float, delta: float, x_attempts: float) -> float:
    """Packet rate above which a device is duty-cycle bound."""
    return delta / (t_tx * x_attempts)


def oracle_sending_rate(lambda_pps: float, t_tx: float, delta: float,
                        x_attempts: float) -> float:
    """Closed-form average frame rate of one device.

    ``x_attempts`` is the number of transmissions per packet: the repeat
    count for unconfirmed traffic, a measured mean for confirmed traffic.
    """
    if t_tx <= 0 or delta <= 0:
        raise ConfigError("t_tx and delta must be positive")
    if x_attempts < 1:
        raise ConfigError("x_attempts must be >= 1")
    if lambda_pps >= saturation_lambda(t_tx, delta, x_attempts):
        return delta / t_tx
    return lambda_pps * x_attempts


def oracle_load(device_rates: list[float], t_tx: float, m_c: int) -> float:
    return t_tx * sum(device_rates) / m_c
