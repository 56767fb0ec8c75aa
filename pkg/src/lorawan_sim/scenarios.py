"""Scenario I/II construction, parameter sweeps and CSV emission."""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import engine, metrics
from .config import Scenario, ScenarioConfig
from .errors import ConfigError
from .frames import TxMode
from .topology import place_devices_uniform_disc

__all__ = [
    "CSV_COLUMNS", "DEFAULT_DISTANCES_M", "SCENARIO1_SFS", "place_devices_uniform_disc",
    "result_row", "run_point", "scenario1_grid", "scenario2_grid", "run_scenario_1",
    "run_scenario_2", "run_grid", "write_csv", "write_trace", "rows_to_csv",
]

CSV_COLUMNS = (
    "scenario", "seed", "devices", "t_i", "mode", "max_tx", "m_c", "sf", "distance_m",
    "pdr", "utilization", "load", "throughput_bps", "app_sent", "app_delivered",
    "mac_sent", "mac_received", "acks_sent",
    # Not strictly metrics, but needed to rerun a row exactly.
    "duration_s", "radius_m",
)

DEFAULT_DISTANCES_M = tuple(float(d) for d in np.arange(1000, 7001, 250))
SCENARIO1_SFS = (7, 8, 9, 10, 11, 12)


def result_row(result: engine.RunResult) -> dict:
    cfg = result.config
    ledger = result.ledger
    tot = ledger.totals()
    single = cfg.scenario is Scenario.SINGLE_DEVICE_MOBILITY
    T = ledger.duration
    return {
        "scenario": cfg.scenario.value,
        "seed": cfg.seed,
        "devices": cfg.device_count,
        "t_i": "" if cfg.t_i is None else repr(cfg.t_i),
        "mode": cfg.tx_mode.value,
        "max_tx": cfg.max_tx,
        "m_c": cfg.m_c,
        "sf": cfg.sf,
        "distance_m": repr(cfg.distance_m) if single else "",
        "pdr": repr(metrics.pdr(ledger)),
        "utilization": repr(metrics.sub_band_utilization(ledger)) if T > 0 else "",
        "load": repr(metrics.sub_band_load(ledger)) if T > 0 else "",
        "throughput_bps": repr(metrics.ul_throughput_bps(ledger)) if T > 0 else "",
        "app_sent": tot.app_sent,
        "app_delivered": tot.app_delivered,
        "mac_sent": tot.mac_sent,
        "mac_received": tot.mac_received,
        "acks_sent": ledger.acks_sent,
        "duration_s": repr(T),
        "radius_m": "" if single else repr(cfg.disc_radius_m),
    }


def run_point(config: ScenarioConfig) -> dict:
    """One simulation, one CSV row. Top-level so process pools can pickle it."""
    return result_row(engine.run(config))


def run_grid(configs: Sequence[ScenarioConfig], workers: int = 1) -> list[dict]:
    """Run independent points; rows come back in grid order whatever ``workers`` is."""
    if workers <= 1 or len(configs) <= 1:
        return [run_point(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_point, configs))


# -- Scenario I ---------------------------------------------------------------

def scenario1_grid(base: ScenarioConfig, distances: Iterable[float] | None = None,
                   sfs: Iterable[int] | None = None) -> list[ScenarioConfig]:
    """Static positions along a line away from the gateway, one run per (distance, SF).

    The device sends ``packets_per_point`` unconfirmed frames back to back at
    the duty-cycle rate on a single channel.
    """
    if base.scenario is not Scenario.SINGLE_DEVICE_MOBILITY:
        raise ConfigError("scenario: run_scenario_1 needs single_device_mobility")
    if base.tx_mode is not TxMode.UNCONFIRMED:
        raise ConfigError("tx_mode: scenario 1 uses unconfirmed frames only")
    if base.m_c != 1:
        raise ConfigError("m_c: scenario 1 uses a single channel")
    distances = DEFAULT_DISTANCES_M if distances is None else tuple(distances)
    sfs = SCENARIO1_SFS if sfs is None else tuple(sfs)
    return [base.replace(distance_m=float(d), sf=int(sf))
            for sf, d in itertools.product(sfs, distances)]


def run_scenario_1(base: ScenarioConfig | None = None, distances: Iterable[float] | None = None,
                   sfs: Iterable[int] | None = None, workers: int = 1) -> list[dict]:
    if base is None:
        base = ScenarioConfig(scenario=Scenario.SINGLE_DEVICE_MOBILITY)
    return run_grid(scenario1_grid(base, distances, sfs), workers)


# -- Scenario II --------------------------------------------------------------

def scenario2_grid(base: ScenarioConfig, devices: Iterable[int] | None = None,
                   t_i: Iterable[float] | None = None,
                   modes: Iterable[TxMode | str] | None = None,
                   max_tx: Iterable[int] | None = None, m_c: Iterable[int] | None = None,
                   seeds: Iterable[int] | None = None) -> list[ScenarioConfig]:
    """Cartesian sweep over the given axes; an omitted axis keeps ``base``'s value."""
    if base.scenario is not Scenario.MULTI_DEVICE_POISSON:
        raise ConfigError("scenario: run_scenario_2 needs multi_device_poisson")
    if base.sf != 12:
        raise ConfigError("sf: scenario 2 runs every device at SF12")
    axes = (
        tuple(devices) if devices is not None else (base.device_count,),
        tuple(t_i) if t_i is not None else (base.traffic_intensity,),
        tuple(TxMode(m) for m in modes) if modes is not None else (base.tx_mode,),
        tuple(max_tx) if max_tx is not None else (base.max_tx,),
        tuple(m_c) if m_c is not None else (base.m_c,),
        tuple(seeds) if seeds is not None else (base.seed,),
    )
    grid = []
    for n, ti, mode, mx, mc, seed in itertools.product(*axes):
        rate = ({"traffic_intensity": ti, "lambda_pps": None} if ti is not None
                else {"traffic_intensity": None, "lambda_pps": base.lambda_pps})
        grid.append(base.replace(device_count=int(n), tx_mode=mode, max_tx=int(mx),
                                 m_c=int(mc), seed=int(seed), **rate))
    return grid


def run_scenario_2(base: ScenarioConfig | None = None, workers: int = 1, **axes) -> list[dict]:
    if base is None:
        base = ScenarioConfig(traffic_intensity=1.0)
    return run_grid(scenario2_grid(base, **axes), workers)


# -- output -------------------------------------------------------------------

def write_csv(rows: Iterable[dict], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def write_trace(trace: Iterable[tuple], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(engine.TRACE_HEADER)
    writer.writerows(trace)
