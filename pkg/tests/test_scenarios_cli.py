import csv
import io

import pytest

from lorawan_sim import cli, scenarios
from lorawan_sim.config import Scenario, ScenarioConfig
from lorawan_sim.engine import TRACE_HEADER
from lorawan_sim.errors import ConfigError

HEADER = ("scenario,seed,devices,t_i,mode,max_tx,m_c,sf,distance_m,pdr,utilization,load,"
          "throughput_bps,app_sent,app_delivered,mac_sent,mac_received,acks_sent")


def test_header_extends_metrics_schema():
    assert ",".join(scenarios.CSV_COLUMNS).startswith(HEADER)


def test_scenario1_points():
    rows = scenarios.run_scenario_1(distances=[1000.0, 7000.0], sfs=[7, 12])
    got = {(r["sf"], float(r["distance_m"])): float(r["pdr"]) for r in rows}
    assert got == {(7, 1000.0): 1.0, (7, 7000.0): 0.0, (12, 1000.0): 1.0, (12, 7000.0): 0.0}
    sf12 = next(r for r in rows if r["sf"] == 12 and r["distance_m"] == "1000.0")
    assert float(sf12["throughput_bps"]) == pytest.approx(168 / 181.0432, rel=1e-6)


def test_scenario1_preconditions():
    base = ScenarioConfig(scenario=Scenario.SINGLE_DEVICE_MOBILITY, tx_mode="confirmed")
    with pytest.raises(ConfigError, match="unconfirmed"):
        scenarios.run_scenario_1(base)
    with pytest.raises(ConfigError, match="single_device"):
        scenarios.run_scenario_1(ScenarioConfig(traffic_intensity=1.0))


def test_scenario2_grid_order_and_rows():
    base = ScenarioConfig(traffic_intensity=1.0, duration_s=3600.0)
    grid = scenarios.scenario2_grid(base, devices=[5, 10], modes=["unconfirmed", "confirmed"],
                                    seeds=[1, 2])
    assert [(c.device_count, c.tx_mode.value, c.seed) for c in grid][:3] == [
        (5, "unconfirmed", 1), (5, "unconfirmed", 2), (5, "confirmed", 1)]
    rows = scenarios.run_grid(grid)
    assert [r["seed"] for r in rows] == [c.seed for c in grid]
    # Each row reproduces on its own, regardless of where it sat in the sweep.
    assert scenarios.run_point(grid[-1]) == rows[-1]
    assert scenarios.run_grid(grid[::-1]) == rows[::-1]
    with pytest.raises(ConfigError, match="SF12"):
        scenarios.scenario2_grid(base.replace(sf=7))


def test_scenario2_single_device_load():
    base = ScenarioConfig(traffic_intensity=1.0, disc_radius_m=500.0)
    # Backlogged device: exactly the duty cycle, less the mean dither per period.
    sat = scenarios.run_scenario_2(base.replace(traffic_intensity=None, lambda_pps=1.0),
                                   devices=[1], modes=["unconfirmed", "confirmed"])
    for r in sat:
        assert float(r["load"]) == pytest.approx(0.01 * 181.0432 / 182.0432, rel=2e-3)
    # At t_I = 1 the queue is critically loaded and idles now and then over one day.
    for r in scenarios.run_scenario_2(base, devices=[1], modes=["unconfirmed", "confirmed"]):
        assert 0.009 < float(r["load"]) <= 0.01


def test_pool_matches_serial():
    base = ScenarioConfig(traffic_intensity=0.5, duration_s=1800.0)
    grid = scenarios.scenario2_grid(base, devices=[3, 6], seeds=[0, 1])
    assert scenarios.run_grid(grid, workers=2) == scenarios.run_grid(grid, workers=1)


def test_cli_run_with_trace(tmp_path):
    out, trace = tmp_path / "out.csv", tmp_path / "trace.csv"
    args = ["run", "--device-count", "8", "--traffic-intensity", "1", "--tx-mode", "confirmed",
            "--max-tx", "8", "--duration-s", "3600", "-o", str(out), "--trace", str(trace)]
    assert cli.main(args) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1 and rows[0]["devices"] == "8" and rows[0]["mode"] == "confirmed"
    lines = trace.read_text().splitlines()
    assert lines[0] == ",".join(TRACE_HEADER) and len(lines) > 10
    first = out.read_bytes(), trace.read_bytes()
    assert cli.main(args) == 0
    assert (out.read_bytes(), trace.read_bytes()) == first


def test_cli_scenario2_sweep_and_config(tmp_path, capsys):
    cfg = tmp_path / "base.cfg"
    cfg.write_text("duration_s = 1800\nmax_tx = 8\ndevice_count = 99\n")
    assert cli.main(["scenario2", "--config", str(cfg), "--device-count", "2,4",
                     "--tx-mode", "unconfirmed,confirmed"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [(r["devices"], r["mode"]) for r in rows] == [
        ("2", "unconfirmed"), ("2", "confirmed"), ("4", "unconfirmed"), ("4", "confirmed")]
    assert {r["max_tx"] for r in rows} == {"8"} and {r["duration_s"] for r in rows} == {"1800.0"}


def test_cli_scenario1(capsys):
    assert cli.main(["scenario1", "--distance-m", "1000,3000", "--sf", "7"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["pdr"] for r in rows] == ["1.0", "0.0"]


def test_cli_errors(capsys):
    assert cli.main(["run", "--device-count", "0"]) == 2
    err = capsys.readouterr().err
    assert "device_count" in err and "traffic_intensity" in err
    with pytest.raises(SystemExit):
        cli.main(["run", "--no-such-flag", "1"])
