"""Frame and transmission-mode types shared by the MAC, medium and server."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TxMode(str, Enum):
    UNCONFIRMED = "unconfirmed"
    CONFIRMED = "confirmed"


class FrameKind(str, Enum):
    DATA_UNCONFIRMED = "data_unconfirmed"
    DATA_CONFIRMED = "data_confirmed"
    ACK = "ack"


@dataclass(slots=True)
class Frame:
    kind: FrameKind
    device_id: int
    fcnt: int
    phy_payload_bytes: int
    sf: int
    frequency_hz: int
    tx_power_dbm: float
    app_packet_id: int
    airtime_s: float = 0.0
    attempt: int = 1

    @property
    def is_data(self) -> bool:
        return self.kind is not FrameKind.ACK
