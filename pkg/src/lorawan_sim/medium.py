"""Shared radio medium with orthogonal channels/SFs and capture-effect collisions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .errors import ConfigError
from .frames import Frame

# EU863-870 default uplink channels followed by the common extra channels.
EU868_UL_CHANNELS_HZ = (
    868_100_000, 868_300_000, 868_500_000,
    867_100_000, 867_300_000, 867_500_000, 867_700_000,
)
EU868_RX2_CHANNEL_HZ = 869_525_000
EU868_RX2_SF = 12

# Power margin a frame needs over each same-channel, same-SF overlapper.
# 0 dB: the strictly stronger frame is captured. 6 dB is the usual co-SF figure.
CAPTURE_THRESHOLD_DB = 0.0


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"


class Outcome(str, Enum):
    RECEIVED = "Received"
    LOST_COLLISION = "LostCollision"
    LOST_SENSITIVITY = "LostSensitivity"


@dataclass(frozen=True)
class ChannelPlan:
    """One uplink sub-band of ``m_c`` channels plus the RX2 downlink channel."""

    ul_channels_hz: tuple[int, ...] = EU868_UL_CHANNELS_HZ[:1]
    rx2_channel_hz: int = EU868_RX2_CHANNEL_HZ
    rx2_sf: int = EU868_RX2_SF
    ul_duty_cycle: float = 0.01
    dl_duty_cycle: float = 0.10

    def __post_init__(self) -> None:
        chans = tuple(self.ul_channels_hz)
        object.__setattr__(self, "ul_channels_hz", chans)
        if not 1 <= len(chans) <= 7:
            raise ConfigError(f"m_c: {len(chans)} not in 1..7")
        if len(set(chans)) != len(chans):
            raise ConfigError("ul_channels_hz: channels must be distinct")
        if self.rx2_channel_hz in chans:
            raise ConfigError("rx2_channel_hz: must not be an uplink channel")
        for name in ("ul_duty_cycle", "dl_duty_cycle"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{name}: {value} not in (0, 1]")

    @classmethod
    def eu868(cls, m_c: int = 1, ul_duty_cycle: float = 0.01,
              dl_duty_cycle: float = 0.10) -> "ChannelPlan":
        if not 1 <= m_c <= len(EU868_UL_CHANNELS_HZ):
            raise ConfigError(f"m_c: {m_c} not in 1..7")
        return cls(EU868_UL_CHANNELS_HZ[:m_c], ul_duty_cycle=ul_duty_cycle,
                   dl_duty_cycle=dl_duty_cycle)

    @property
    def m_c(self) -> int:
        return len(self.ul_channels_hz)

    def subband_of(self, frequency_hz: int) -> str:
        """Downlink duty-cycle budget a frequency draws from."""
        return "rx2" if frequency_hz == self.rx2_channel_hz else "ul"


@dataclass(eq=False, slots=True)
class ActiveTransmission:
    """A signal on the air.

    ``rx_power_dbm`` is the power at the intended receiver (the gateway for
    uplinks, the device for downlinks). ``power_at_gw_dbm`` is what the
    gateway's own receiver sees; for a downlink that is its transmit power.
    """

    frame: Frame
    start: float
    end: float
    rx_power_dbm: float
    direction: Direction = Direction.UP
    power_at_gw_dbm: float | None = None
    overlapping: list["ActiveTransmission"] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.power_at_gw_dbm is None:
            self.power_at_gw_dbm = self.rx_power_dbm

    @property
    def key(self) -> tuple[int, int]:
        return (self.frame.frequency_hz, self.frame.sf)

    def overlaps(self, other: "ActiveTransmission") -> bool:
        return self.start < other.end and other.start < self.end


def resolve_reception(tx: ActiveTransmission, overlapping: Iterable[ActiveTransmission],
                      sensitivity_dbm: float,
                      capture_threshold_db: float = CAPTURE_THRESHOLD_DB) -> Outcome:
    """Decide whether ``tx`` survives at its receiver.

    Only same-frequency, same-SF signals that overlap in time interfere. At
    the gateway, a concurrent downlink on that pair deafens the receiver. At a
    device only other downlinks count.
    """
    if tx.rx_power_dbm < sensitivity_dbm:
        return Outcome.LOST_SENSITIVITY
    key = tx.key
    for other in overlapping:
        if other is tx or other.key != key or not tx.overlaps(other):
            continue
        if tx.direction is Direction.UP:
            interferer = other.power_at_gw_dbm
        elif other.direction is Direction.DOWN:
            interferer = other.rx_power_dbm
        else:
            continue
        margin = tx.rx_power_dbm - interferer
        if margin < capture_threshold_db or margin <= 0.0:
            return Outcome.LOST_COLLISION
    return Outcome.RECEIVED


class Medium:
    """Tracks on-air signals and scheduled downlinks per (frequency, SF)."""

    def __init__(self, capture_threshold_db: float = CAPTURE_THRESHOLD_DB) -> None:
        self.capture_threshold_db = capture_threshold_db
        self._active: dict[tuple[int, int], list[ActiveTransmission]] = {}
        self._scheduled_dl: dict[tuple[int, int], list[tuple[float, float]]] = {}

    def begin(self, tx: ActiveTransmission) -> None:
        if tx.direction is Direction.DOWN:
            slots = self._scheduled_dl.get(tx.key)
            if slots and (tx.start, tx.end) in slots:
                slots.remove((tx.start, tx.end))
        bucket = self._active.setdefault(tx.key, [])
        for other in bucket:
            other.overlapping.append(tx)
            tx.overlapping.append(other)
        bucket.append(tx)

    def end(self, tx: ActiveTransmission, sensitivity_dbm: float) -> Outcome:
        self._active[tx.key].remove(tx)
        outcome = resolve_reception(tx, tx.overlapping, sensitivity_dbm,
                                    self.capture_threshold_db)
        tx.overlapping = []
        return outcome

    def active(self, frequency_hz: int, sf: int) -> list[ActiveTransmission]:
        return list(self._active.get((frequency_hz, sf), ()))

    def schedule_downlink(self, frequency_hz: int, sf: int, start: float, end: float) -> None:
        self._scheduled_dl.setdefault((frequency_hz, sf), []).append((start, end))

    def gateway_busy_check(self, now: float, frequency_hz: int, sf: int,
                           until: float | None = None) -> bool:
        """True if an on-air signal or a scheduled downlink occupies the pair.

        With ``until`` the check covers the interval ``[now, until)``.
        """
        until = now if until is None else until
        key = (frequency_hz, sf)
        for tx in self._active.get(key, ()):
            if tx.start <= until and now < tx.end:
                return True
        for start, end in self._scheduled_dl.get(key, ()):
            if start <= until and now < end:
                return True
        return False
