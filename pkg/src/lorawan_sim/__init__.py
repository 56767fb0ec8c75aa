"""Discrete-event simulator of Class A LoRaWAN uplinks around a single gateway."""

from .config import Scenario, ScenarioConfig, config_from_mapping, read_config_file
from .engine import RunResult, Simulation, run
from .errors import ConfigError
from .frames import Frame, FrameKind, TxMode
from .medium import ChannelPlan, Outcome, resolve_reception
from .metrics import (oracle_sending_rate, pdr, sub_band_load, sub_band_utilization,
                      ul_throughput_bps)
from .phy import LinkBudget, PhyParams, airtime, path_loss_db, sensitivity_dbm
from .scenarios import run_scenario_1, run_scenario_2
from .topology import place_devices_uniform_disc

__version__ = "0.1.0"

__all__ = [
    "Scenario", "ScenarioConfig", "config_from_mapping", "read_config_file",
    "RunResult", "Simulation", "run", "ConfigError", "Frame", "FrameKind", "TxMode",
    "ChannelPlan", "Outcome", "resolve_reception", "oracle_sending_rate", "pdr",
    "sub_band_load", "sub_band_utilization", "ul_throughput_bps", "LinkBudget", "PhyParams",
    "airtime", "path_loss_db", "sensitivity_dbm", "run_scenario_1", "run_scenario_2",
    "place_devices_uniform_disc",
]
