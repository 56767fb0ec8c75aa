"""Class A end-device MAC state machine.

Callbacks return *actions*: ``(time, kind, payload)`` tuples that the engine
turns into events. The device never touches the event queue itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError
from .frames import Frame, FrameKind, TxMode
from .medium import ChannelPlan
from .phy import PhyParams, airtime


class MacState(str, Enum):
    IDLE = "Idle"
    TRANSMITTING = "Transmitting"
    WAIT_RX1 = "WaitRx1"
    RX1_OPEN = "Rx1Open"
    WAIT_RX2 = "WaitRx2"
    RX2_OPEN = "Rx2Open"
    DUTY_CYCLE_BLOCKED = "DutyCycleBlocked"


class Action(str, Enum):
    TX_START = "TxStart"
    RX_WINDOW_OPEN = "RxWindowOpen"
    RX_WINDOW_CLOSE = "RxWindowClose"


@dataclass(frozen=True)
class MacConfig:
    tx_mode: TxMode = TxMode.UNCONFIRMED
    max_tx_unconfirmed: int = 1
    max_tx_confirmed: int = 8
    recv_delay1_s: float = 1.0
    recv_delay2_s: float = 2.0
    ul_duty_cycle: float = 0.01
    initial_sf: int = 12
    payload_bytes: int = 21
    # Preamble-detection listen time of an empty receive window, in symbols.
    rx_window_symbols: int = 8
    # Upper bound of the uniform random delay added to duty-cycle-deferred starts.
    tx_dither_s: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "tx_mode", TxMode(self.tx_mode))
        if self.max_tx_unconfirmed < 1 or self.max_tx_confirmed < 1:
            raise ConfigError("max_tx: must be >= 1")
        if abs(self.recv_delay2_s - (self.recv_delay1_s + 1.0)) > 1e-12:
            raise ConfigError("recv_delay2_s: must equal recv_delay1_s + 1")
        if not 0.0 < self.ul_duty_cycle <= 1.0:
            raise ConfigError(f"ul_duty_cycle: {self.ul_duty_cycle} not in (0, 1]")
        if not 7 <= self.initial_sf <= 12:
            raise ConfigError(f"initial_sf: {self.initial_sf} not in 7..12")

    @property
    def max_tx(self) -> int:
        if self.tx_mode is TxMode.CONFIRMED:
            return self.max_tx_confirmed
        return self.max_tx_unconfirmed


def confirmed_sf(initial_sf: int, attempt: int) -> int:
    """SF of a confirmed attempt: +1 after every two attempts, capped at 12."""
    return min(12, initial_sf + (attempt - 1) // 2)


class ClassADevice:
    """One pre-activated Class A end device."""

    def __init__(self, device_id: int, position: tuple[float, float], config: MacConfig,
                 plan: ChannelPlan, rng: np.random.Generator,
                 phy: PhyParams | None = None, tx_power_dbm: float = 14.0) -> None:
        self.device_id = device_id
        self.position = position
        self.distance_m = float(np.hypot(*position))
        self.config = config
        self.plan = plan
        self.rng = rng
        self.phy = phy or PhyParams(sf=config.initial_sf)
        self.tx_power_dbm = tx_power_dbm

        self.fcnt_up = 0
        self.fcnt_down = 0
        self.mac_state = MacState.IDLE
        self.current_attempt = 0
        self.duty_free_at = 0.0
        self.pending_app_packets: deque[int] = deque()
        self.current_sf = config.initial_sf
        self.current_packet: int | None = None
        self.last_channel: int | None = None
        self.last_tx_start = 0.0
        self.last_airtime = 0.0
        self.frames_sent = 0
        self.tx_log: list[tuple[float, float]] | None = None
        # Bumped on every uplink; stale receive-window actions carry an old value.
        self.token = 0
        self._rx_locked = False
        self._airtimes: dict[int, float] = {}
        self._tx_scheduled = False

    # -- application side -------------------------------------------------

    def on_app_packet(self, packet_id: int, now: float) -> list[tuple]:
        self.pending_app_packets.append(packet_id)
        if self.mac_state is MacState.IDLE and not self._tx_scheduled:
            return self._schedule_at_duty(now)
        return []

    # -- transmission ------------------------------------------------------

    def frame_airtime(self, sf: int) -> float:
        cached = self._airtimes.get(sf)
        if cached is None:
            cached = self._airtimes[sf] = airtime(self.phy.with_sf(sf), self.config.payload_bytes)
        return cached

    def begin_transmission(self, now: float) -> Frame:
        """Build the frame for the next attempt. Called at a TxStart event."""
        if now < self.duty_free_at - 1e-9:
            raise RuntimeError(f"device {self.device_id}: duty cycle violated at {now}")
        cfg = self.config
        self._tx_scheduled = False
        channels = self.plan.ul_channels_hz
        if self.current_attempt == 0:
            self.current_packet = self.pending_app_packets.popleft()
            self.fcnt_up += 1
            self.current_sf = cfg.initial_sf
            channel = channels[int(self.rng.integers(len(channels)))]
        elif cfg.tx_mode is TxMode.CONFIRMED:
            self.current_sf = confirmed_sf(cfg.initial_sf, self.current_attempt + 1)
            if len(channels) > 1:
                others = [c for c in channels if c != self.last_channel]
                channel = others[int(self.rng.integers(len(others)))]
            else:
                channel = channels[0]
        else:
            channel = channels[int(self.rng.integers(len(channels)))]
        self.current_attempt += 1
        self.last_channel = channel
        self.mac_state = MacState.TRANSMITTING
        t_air = self.frame_airtime(self.current_sf)
        self.last_tx_start = now
        self.last_airtime = t_air
        self.frames_sent += 1
        if self.tx_log is not None:
            self.tx_log.append((now, t_air))
        self.token += 1
        kind = (FrameKind.DATA_CONFIRMED if cfg.tx_mode is TxMode.CONFIRMED
                else FrameKind.DATA_UNCONFIRMED)
        return Frame(kind, self.device_id, self.fcnt_up, cfg.payload_bytes, self.current_sf,
                     channel, self.tx_power_dbm, self.current_packet, t_air,
                     self.current_attempt)

    def on_tx_complete(self, frame: Frame, now: float) -> list[tuple]:
        cfg = self.config
        self.duty_free_at = self.last_tx_start + frame.airtime_s / cfg.ul_duty_cycle
        self.mac_state = MacState.WAIT_RX1
        self._rx_locked = False
        return [
            (now + cfg.recv_delay1_s, Action.RX_WINDOW_OPEN, (self.token, 1)),
            (now + cfg.recv_delay2_s, Action.RX_WINDOW_OPEN, (self.token, 2)),
        ]

    # -- receive windows ---------------------------------------------------

    def window_params(self, window: int) -> tuple[int, int]:
        """(frequency, SF) the device listens on in RX1 or RX2."""
        if window == 1:
            return self.last_channel, self.current_sf
        return self.plan.rx2_channel_hz, self.plan.rx2_sf

    def on_rx_window_open(self, token: int, window: int, now: float) -> list[tuple]:
        if token != self.token or self._rx_locked:
            return []
        if window == 1 and self.mac_state is not MacState.WAIT_RX1:
            return []
        if window == 2 and self.mac_state is not MacState.WAIT_RX2:
            return []
        self.mac_state = MacState.RX1_OPEN if window == 1 else MacState.RX2_OPEN
        _, sf = self.window_params(window)
        listen = self.config.rx_window_symbols * (1 << sf) / self.phy.bandwidth_hz
        return [(now + listen, Action.RX_WINDOW_CLOSE, (token, window))]

    def on_preamble(self, window: int) -> bool:
        """An addressed downlink starts in an open window; stay in receive."""
        expected = MacState.RX1_OPEN if window == 1 else MacState.RX2_OPEN
        if self.mac_state is not expected:
            return False
        self._rx_locked = True
        return True

    def on_rx_window_close(self, token: int, window: int, now: float) -> list[tuple]:
        if token != self.token or self._rx_locked:
            return []
        if window == 1 and self.mac_state is MacState.RX1_OPEN:
            self.mac_state = MacState.WAIT_RX2
            return []
        if window == 2 and self.mac_state is MacState.RX2_OPEN:
            return self.on_rx_windows_closed(now)
        return []

    def on_downlink_end(self, ack: Frame | None, now: float) -> tuple[bool, list[tuple]]:
        """A locked reception finished; ``ack`` is None if it was not decoded.

        Returns (ack accepted, actions).
        """
        if not self._rx_locked:
            return False, []
        self._rx_locked = False
        if ack is not None:
            accepted, actions = self.on_ack_received(ack, now)
            if accepted:
                return True, actions
        return False, self.on_rx_windows_closed(now)

    def on_ack_received(self, ack: Frame, now: float) -> tuple[bool, list[tuple]]:
        if (ack.device_id != self.device_id or ack.fcnt != self.fcnt_up
                or self.mac_state not in (MacState.RX1_OPEN, MacState.RX2_OPEN)
                or self.config.tx_mode is not TxMode.CONFIRMED):
            return False, []
        self.fcnt_down += 1
        return True, self._finish_frame(now)

    def on_rx_windows_closed(self, now: float) -> list[tuple]:
        if self.current_attempt < self.config.max_tx:
            return self._schedule_at_duty(now)
        return self._finish_frame(now)

    # -- helpers -----------------------------------------------------------

    def _finish_frame(self, now: float) -> list[tuple]:
        self.current_attempt = 0
        self.current_packet = None
        self.mac_state = MacState.IDLE
        if self.pending_app_packets:
            return self._schedule_at_duty(now)
        return []

    def _schedule_at_duty(self, now: float) -> list[tuple]:
        start = max(now, self.duty_free_at)
        if start > now and self.config.tx_dither_s > 0:
            start += self.config.tx_dither_s * float(self.rng.random())
        self.mac_state = MacState.DUTY_CYCLE_BLOCKED if start > now else MacState.IDLE
        self._tx_scheduled = True
        return [(start, Action.TX_START, self.token)]
