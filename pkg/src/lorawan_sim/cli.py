"""Command line: ``scenario1``, ``scenario2`` and single ``run`` subcommands.

Every ScenarioConfig field has a ``--field-name`` flag. Sweep axes take
comma-separated lists. Precedence is defaults < ``--config`` file < flags.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from typing import Iterator, Sequence, TextIO

from . import engine, scenarios
from .config import (FIELD_NAMES, Scenario, ScenarioConfig, config_from_mapping, parse_value,
                     parse_values, read_config_file)
from .errors import ConfigError

# Fields that accept a comma-separated list, per subcommand.
SWEEP_FIELDS = {
    "scenario1": ("distance_m", "sf"),
    "scenario2": ("device_count", "traffic_intensity", "tx_mode", "max_tx", "m_c", "seed"),
    "run": (),
}


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lorawan-sim",
                                     description="Class A LoRaWAN uplink simulator.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "scenario1": "single device at static distances, SF sweep (PDR and throughput)",
        "scenario2": "many Poisson devices in a disc, sweep over load and MAC settings",
        "run": "one simulation with the given settings",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", metavar="FILE", help="flat key = value file")
        p.add_argument("-o", "--output", default="-", metavar="PATH",
                       help="CSV destination (default: stdout)")
        if name == "run":
            p.add_argument("--trace", metavar="PATH",
                           help="also write the per-event trace CSV here")
        else:
            p.add_argument("--workers", type=int, default=1,
                           help="parallel processes for independent points")
        sweep = SWEEP_FIELDS[name]
        for field in FIELD_NAMES:
            if field == "scenario" and name != "run":
                continue
            p.add_argument(_flag(field), dest=field, metavar="LIST" if field in sweep else "V",
                           help="comma-separated sweep" if field in sweep else None)
    return parser


@contextlib.contextmanager
def _open_out(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _base_and_axes(args: argparse.Namespace) -> tuple[ScenarioConfig, dict]:
    raw = read_config_file(args.config) if args.config else {}
    for field in FIELD_NAMES:
        value = getattr(args, field, None)
        if value is not None:
            raw[field] = value
    sweep = SWEEP_FIELDS[args.command]
    axes = {}
    scalars = {}
    for key, text in raw.items():
        if key in sweep:
            values = parse_values(key, text)
            if len(values) > 1:
                axes[key] = values
                continue
            scalars[key] = values[0]
        else:
            scalars[key] = parse_value(key, text)
    if args.command == "scenario1":
        scalars["scenario"] = Scenario.SINGLE_DEVICE_MOBILITY
        for key in ("distance_m", "sf"):
            if key in scalars:
                axes[key] = [scalars.pop(key)]
    elif args.command == "scenario2":
        scalars["scenario"] = Scenario.MULTI_DEVICE_POISSON
        if "traffic_intensity" not in scalars and "lambda_pps" not in scalars \
                and "traffic_intensity" not in axes:
            scalars["traffic_intensity"] = 1.0
    return config_from_mapping(scalars), axes


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        base, axes = _base_and_axes(args)
        if args.command == "scenario1":
            rows = scenarios.run_scenario_1(base, axes.get("distance_m"), axes.get("sf"),
                                            workers=args.workers)
        elif args.command == "scenario2":
            names = {"device_count": "devices", "traffic_intensity": "t_i",
                     "tx_mode": "modes", "max_tx": "max_tx", "m_c": "m_c", "seed": "seeds"}
            rows = scenarios.run_scenario_2(
                base, workers=args.workers, **{names[k]: v for k, v in axes.items()})
        else:
            result = engine.run(base, trace=args.trace is not None)
            rows = [scenarios.result_row(result)]
            if args.trace:
                with open(args.trace, "w", newline="") as fh:
                    scenarios.write_trace(result.trace, fh)
    except ConfigError as exc:
        print(f"lorawan-sim: error: {exc}", file=sys.stderr)
        return 2
    with _open_out(args.output) as out:
        scenarios.write_csv(rows, out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
