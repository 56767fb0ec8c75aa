"""Deterministic discrete-event engine binding devices, medium, server and traffic."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

import numpy as np

from .config import Scenario, ScenarioConfig
from .device_mac import Action, ClassADevice, MacConfig
from .frames import FrameKind, TxMode
from .gateway import NetworkServer, ScheduledAck
from .medium import ActiveTransmission, ChannelPlan, Direction, Medium, Outcome
from .metrics import DeviceRecord, MetricsLedger
from .phy import path_loss_db, sensitivity_dbm
from .topology import place_devices_uniform_disc
from .traffic import PoissonSource, device_rng

# Substream identifiers under the master seed.
STREAM_TRAFFIC, STREAM_MAC, STREAM_PLACEMENT = 0, 1, 2


class EventKind(IntEnum):
    APP_ARRIVAL = 0
    TX_START = 1
    TX_END = 2
    RX_WINDOW_OPEN = 3
    RX_WINDOW_CLOSE = 4
    ACK_TX_START = 5
    ACK_TX_END = 6
    METRICS_SNAPSHOT = 7
    SIM_END = 8


EVENT_NAMES = {
    EventKind.APP_ARRIVAL: "AppArrival", EventKind.TX_START: "TxStart",
    EventKind.TX_END: "TxEnd", EventKind.RX_WINDOW_OPEN: "RxWindowOpen",
    EventKind.RX_WINDOW_CLOSE: "RxWindowClose", EventKind.ACK_TX_START: "AckTxStart",
    EventKind.ACK_TX_END: "AckTxEnd", EventKind.METRICS_SNAPSHOT: "MetricsSnapshot",
    EventKind.SIM_END: "SimEnd",
}

_ACTION_KIND = {
    Action.TX_START: EventKind.TX_START,
    Action.RX_WINDOW_OPEN: EventKind.RX_WINDOW_OPEN,
    Action.RX_WINDOW_CLOSE: EventKind.RX_WINDOW_CLOSE,
}

TRACE_HEADER = ("time", "seq", "kind", "subject", "channel", "sf", "outcome")


@dataclass
class RunResult:
    config: ScenarioConfig
    ledger: MetricsLedger
    devices: list[ClassADevice]
    trace: list[tuple] | None = None


def device_positions(config: ScenarioConfig) -> np.ndarray:
    if config.scenario is Scenario.SINGLE_DEVICE_MOBILITY:
        return np.array([[config.distance_m, 0.0]])
    rng = device_rng(config.seed, STREAM_PLACEMENT, 0)
    return place_devices_uniform_disc(config.device_count, config.disc_radius_m, rng)


class Simulation:
    """One run. Build, call :meth:`run` once."""

    def __init__(self, config: ScenarioConfig, positions: Sequence | None = None,
                 trace: bool = False, log_tx: bool = False) -> None:
        self.config = config
        self.T = config.duration
        self.plan = ChannelPlan.eu868(config.m_c, config.ul_duty_cycle, config.dl_duty_cycle)
        self.budget = config.link_budget
        self.medium = Medium(config.capture_threshold_db)
        confirmed = config.tx_mode is TxMode.CONFIRMED
        self.mac_config = MacConfig(
            tx_mode=config.tx_mode,
            max_tx_unconfirmed=1 if confirmed else config.max_tx,
            max_tx_confirmed=config.max_tx if confirmed else 1,
            recv_delay1_s=config.recv_delay1_s,
            recv_delay2_s=config.recv_delay1_s + 1.0,
            ul_duty_cycle=config.ul_duty_cycle,
            initial_sf=config.sf,
            payload_bytes=config.payload_bytes,
            tx_dither_s=config.dither,
        )
        self.server = NetworkServer(self.plan, self.medium, config.recv_delay1_s,
                                    config.recv_delay1_s + 1.0, config.ack_payload_bytes,
                                    config.phy)
        if positions is None:
            positions = device_positions(config)
        self.devices: list[ClassADevice] = []
        self.records: list[DeviceRecord] = []
        self._path_loss: list[float] = []
        for i, pos in enumerate(positions):
            dev = ClassADevice(i, (float(pos[0]), float(pos[1])), self.mac_config, self.plan,
                               device_rng(config.seed, STREAM_MAC, i), config.phy,
                               config.tx_power_dbm)
            if log_tx:
                dev.tx_log = []
            self.devices.append(dev)
            self.records.append(DeviceRecord())
            self._path_loss.append(path_loss_db(self.budget, dev.distance_m))
        self._sens: dict[int, float] = {}
        self._queue: list[tuple] = []
        self._seq = 0
        self.trace: list[tuple] | None = [] if trace else None
        self._ran = False
        self.now = 0.0

    # -- queue -------------------------------------------------------------

    def schedule(self, time: float, kind: EventKind, subject: int, payload=None) -> None:
        if time < self.now - 1e-9:
            raise RuntimeError(f"event {kind.name} scheduled in the past")
        heapq.heappush(self._queue, (time, self._seq, kind, subject, payload))
        self._seq += 1

    def _push_actions(self, subject: int, actions: list[tuple]) -> None:
        for time, action, payload in actions:
            self.schedule(time, _ACTION_KIND[action], subject, payload)

    def sensitivity(self, sf: int) -> float:
        s = self._sens.get(sf)
        if s is None:
            s = self._sens[sf] = sensitivity_dbm(sf, self.config.bandwidth_hz,
                                                 self.config.noise_figure_db)
        return s

    def _log(self, time: float, seq: int, kind: str, subject: int, channel="", sf="",
             outcome="") -> None:
        self.trace.append((f"{time:.9f}", seq, kind, subject, channel, sf, outcome))

    # -- run ---------------------------------------------------------------

    def run(self) -> RunResult:
        if self._ran:
            raise RuntimeError("Simulation.run() may only be called once")
        self._ran = True
        T = self.T
        cfg = self.config
        sources: list[PoissonSource | None] = []
        if T > 0:
            if cfg.scenario is Scenario.SINGLE_DEVICE_MOBILITY:
                for k in range(cfg.packets_per_point):
                    self.schedule(0.0, EventKind.APP_ARRIVAL, 0, k)
                sources = [None]
            else:
                lam = cfg.lambda_effective
                for dev in self.devices:
                    src = PoissonSource(lam, device_rng(cfg.seed, STREAM_TRAFFIC, dev.device_id))
                    sources.append(src)
                    first = src.next_arrival(0.0)
                    if first < T:
                        self.schedule(first, EventKind.APP_ARRIVAL, dev.device_id, 0)
            self.schedule(T, EventKind.SIM_END, -1)

        queue = self._queue
        devices = self.devices
        records = self.records
        server = self.server
        medium = self.medium
        trace = self.trace
        pop = heapq.heappop

        while queue:
            time, seq, kind, subject, payload = pop(queue)
            if time >= T:
                if trace is not None and kind is EventKind.SIM_END:
                    self._log(time, seq, "SimEnd", -1)
                break
            self.now = time

            if kind is EventKind.APP_ARRIVAL:
                dev = devices[subject]
                records[subject].app_generated += 1
                src = sources[subject]
                if src is not None:
                    nxt = src.next_arrival(time)
                    if nxt < T:
                        self.schedule(nxt, EventKind.APP_ARRIVAL, subject, payload + 1)
                if trace is not None:
                    self._log(time, seq, "AppArrival", subject)
                self._push_actions(subject, dev.on_app_packet(payload, time))

            elif kind is EventKind.TX_START:
                dev = devices[subject]
                frame = dev.begin_transmission(time)
                rec = records[subject]
                rec.mac_sent += 1
                rec.mac_sent_airtime += frame.airtime_s
                if frame.attempt == 1:
                    rec.app_sent += 1
                rx = frame.tx_power_dbm - self._path_loss[subject]
                tx = ActiveTransmission(frame, time, time + frame.airtime_s, rx)
                medium.begin(tx)
                if trace is not None:
                    self._log(time, seq, "TxStart", subject, frame.frequency_hz, frame.sf)
                self.schedule(tx.end, EventKind.TX_END, subject, tx)

            elif kind is EventKind.TX_END:
                dev = devices[subject]
                tx = payload
                frame = tx.frame
                outcome = medium.end(tx, self.sensitivity(frame.sf))
                if trace is not None:
                    self._log(time, seq, "TxEnd", subject, frame.frequency_hz, frame.sf,
                              outcome.value)
                self._push_actions(subject, dev.on_tx_complete(frame, time))
                if outcome is Outcome.RECEIVED:
                    rec = records[subject]
                    rec.mac_received += 1
                    rec.mac_received_airtime += frame.airtime_s
                    new, ack = server.on_ul_frame(frame, time)
                    if new:
                        rec.app_delivered += 1
                        rec.payload_bits_delivered += 8 * frame.phy_payload_bytes
                    if trace is not None and frame.kind is FrameKind.DATA_CONFIRMED:
                        self._log(time, seq, "AckSchedule", subject,
                                  ack.frequency_hz if ack else "", ack.sf if ack else "",
                                  f"rx{ack.window}" if ack else "none")
                    if ack is not None:
                        self.schedule(ack.start, EventKind.ACK_TX_START, subject, ack)

            elif kind is EventKind.RX_WINDOW_OPEN:
                if trace is not None:
                    self._log(time, seq, "RxWindowOpen", subject, "", "", payload[1])
                self._push_actions(subject,
                                   devices[subject].on_rx_window_open(*payload, time))

            elif kind is EventKind.RX_WINDOW_CLOSE:
                if trace is not None:
                    self._log(time, seq, "RxWindowClose", subject, "", "", payload[1])
                self._push_actions(subject,
                                   devices[subject].on_rx_window_close(*payload, time))

            elif kind is EventKind.ACK_TX_START:
                ack: ScheduledAck = payload
                frame = server.ack_frame(ack, cfg.gw_tx_power_dbm)
                rx = cfg.gw_tx_power_dbm - self._path_loss[subject]
                tx = ActiveTransmission(frame, time, ack.end, rx, Direction.DOWN,
                                        power_at_gw_dbm=cfg.gw_tx_power_dbm)
                medium.begin(tx)
                locked = rx >= self.sensitivity(ack.sf) and devices[subject].on_preamble(
                    ack.window)
                if trace is not None:
                    self._log(time, seq, "AckTxStart", subject, ack.frequency_hz, ack.sf,
                              f"rx{ack.window}")
                self.schedule(ack.end, EventKind.ACK_TX_END, subject, (tx, ack, locked))

            elif kind is EventKind.ACK_TX_END:
                tx, ack, locked = payload
                outcome = medium.end(tx, self.sensitivity(ack.sf))
                server.pop_ack(ack)
                if trace is not None:
                    self._log(time, seq, "AckTxEnd", subject, ack.frequency_hz, ack.sf,
                              outcome.value)
                if locked:
                    got = tx.frame if outcome is Outcome.RECEIVED else None
                    accepted, actions = devices[subject].on_downlink_end(got, time)
                    if accepted:
                        records[subject].acks_received += 1
                    self._push_actions(subject, actions)

        ledger = MetricsLedger(T, self.plan.m_c, cfg.ul_duty_cycle, self.records,
                               server.acks_sent)
        return RunResult(cfg, ledger, self.devices, self.trace)


def run(config: ScenarioConfig, trace: bool = False, positions: Sequence | None = None,
        log_tx: bool = False) -> RunResult:
    """Simulate ``[0, T]`` for ``config``; same config and seed give identical output."""
    return Simulation(config, positions, trace, log_tx).run()


def saturated_period(config: ScenarioConfig) -> float:
    return config.t_tx / config.ul_duty_cycle

