"""Single gateway plus network server: dedup, delivery and ACK scheduling."""

from __future__ import annotations

from dataclasses import dataclass, field

from .frames import Frame, FrameKind
from .medium import ChannelPlan, Medium
from .phy import PhyParams, airtime


@dataclass(frozen=True)
class ScheduledAck:
    device_id: int
    fcnt: int
    window: int
    frequency_hz: int
    sf: int
    start: float
    airtime_s: float

    @property
    def end(self) -> float:
        return self.start + self.airtime_s


@dataclass
class NetServerState:
    last_fcnt_per_device: dict[int, int] = field(default_factory=dict)
    dl_duty_free_at: dict[str, float] = field(default_factory=dict)
    pending_acks: list[ScheduledAck] = field(default_factory=list)


class NetworkServer:
    """Receives uplinks forwarded by the gateway and answers confirmed ones.

    An ACK goes into RX1 (uplink channel and SF) when the downlink duty-cycle
    budget of that sub-band is free and the pair is idle for the whole ACK;
    otherwise into RX2 under the same checks, otherwise nowhere.
    """

    def __init__(self, plan: ChannelPlan, medium: Medium, recv_delay1_s: float = 1.0,
                 recv_delay2_s: float = 2.0, ack_payload_bytes: int = 12,
                 phy: PhyParams | None = None) -> None:
        self.plan = plan
        self.medium = medium
        self.recv_delay1_s = recv_delay1_s
        self.recv_delay2_s = recv_delay2_s
        self.ack_payload_bytes = ack_payload_bytes
        self.phy = phy or PhyParams()
        self.state = NetServerState()
        self.acks_sent = 0
        self._ack_airtimes: dict[int, float] = {}

    def ack_airtime(self, sf: int) -> float:
        t = self._ack_airtimes.get(sf)
        if t is None:
            t = self._ack_airtimes[sf] = airtime(self.phy.with_sf(sf), self.ack_payload_bytes)
        return t

    def dl_duty_update(self, subband: str, start: float, airtime_s: float) -> float:
        free_at = start + airtime_s / self.plan.dl_duty_cycle
        self.state.dl_duty_free_at[subband] = free_at
        return free_at

    def _feasible(self, frequency_hz: int, sf: int, start: float) -> float | None:
        t_air = self.ack_airtime(sf)
        if self.state.dl_duty_free_at.get(self.plan.subband_of(frequency_hz), 0.0) > start:
            return None
        if self.medium.gateway_busy_check(start, frequency_hz, sf, start + t_air):
            return None
        return t_air

    def on_ul_frame(self, frame: Frame, now: float) -> tuple[bool, ScheduledAck | None]:
        """Handle a received uplink at its end time ``now``.

        Returns (new application delivery, scheduled ACK or None).
        """
        last = self.state.last_fcnt_per_device.get(frame.device_id, 0)
        new_delivery = frame.fcnt > last
        if new_delivery:
            self.state.last_fcnt_per_device[frame.device_id] = frame.fcnt
        if frame.kind is not FrameKind.DATA_CONFIRMED:
            return new_delivery, None

        choices = (
            (1, frame.frequency_hz, frame.sf, now + self.recv_delay1_s),
            (2, self.plan.rx2_channel_hz, self.plan.rx2_sf, now + self.recv_delay2_s),
        )
        for window, freq, sf, start in choices:
            t_air = self._feasible(freq, sf, start)
            if t_air is None:
                continue
            ack = ScheduledAck(frame.device_id, frame.fcnt, window, freq, sf, start, t_air)
            self.dl_duty_update(self.plan.subband_of(freq), start, t_air)
            self.medium.schedule_downlink(freq, sf, start, ack.end)
            self.state.pending_acks.append(ack)
            self.acks_sent += 1
            return new_delivery, ack
        return new_delivery, None

    def pop_ack(self, ack: ScheduledAck) -> None:
        self.state.pending_acks.remove(ack)

    def ack_frame(self, ack: ScheduledAck, tx_power_dbm: float) -> Frame:
        return Frame(FrameKind.ACK, ack.device_id, ack.fcnt, self.ack_payload_bytes, ack.sf,
                     ack.frequency_hz, tx_power_dbm, -1, ack.airtime_s, 1)
