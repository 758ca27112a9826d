"""
Command-line front end.

    bonus-malus run-scenario <config> [--out DIR] [--quadrature-nodes J]
    bonus-malus trace <config> [--out DIR] [--quadrature-nodes J]
    bonus-malus simulate <config> [--out DIR] [--quadrature-nodes J] [--seed N]

``<config>`` is a JSON file or the name of a bundled scenario
(``scenario-1`` .. ``scenario-4``, ``lgpif``).  Exit status is 0 on success,
1 for configuration errors and 2 for numerical failures.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ScenarioConfig, bundled_scenarios, load_config
from .errors import ConfigError, ConvergenceError, NumericalError
from .report import dump_json, simulation_report, write_scenario, write_trace
from .simulation import simulate
from .study import run, run_trace

log = logging.getLogger("bonus_malus")


def _out_dir(args, config: ScenarioConfig) -> Path:
    if args.out:
        return Path(args.out)
    if config.output:
        return Path(config.output)
    return Path("out") / config.name


def _load(args) -> ScenarioConfig:
    config = load_config(args.config)
    return config.with_overrides(quadrature_nodes=args.quadrature_nodes,
                                 seed=getattr(args, "seed", None))


def cmd_run_scenario(args) -> int:
    config = _load(args)
    result = run(config)
    for path in write_scenario(result, _out_dir(args, config)):
        print(path)
    return 0


def cmd_trace(args) -> int:
    config = _load(args)
    if "pfos" not in config.schemes:
        raise ConfigError("schemes must include 'pfos' for the trace command")
    print(write_trace(run_trace(config), _out_dir(args, config)))
    return 0


def cmd_simulate(args) -> int:
    config = _load(args)
    if config.simulation is None:
        raise ConfigError("missing field 'simulation'")
    result = run(config)
    sim = simulate(config.portfolio, config.rule, result.schemes, config.simulation)
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(simulation_report(result, sim), out / "sim-report.json")
    print(out / "sim-report.json")
    return 0


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bonus-malus",
        description="Bonus-malus relativity tables, full optimization and double-counting metrics.",
        epilog="bundled scenarios: " + ", ".join(bundled_scenarios()),
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="scenario JSON path or bundled scenario name")
        p.add_argument("--out", help="output directory")
        p.add_argument("--quadrature-nodes", type=int, metavar="J", help="Gauss nodes (default 64)")

    p = sub.add_parser("run-scenario", help="write relativities.csv, priori.csv, metrics.md, report.json")
    common(p)
    p.set_defaults(func=cmd_run_scenario)
    p = sub.add_parser("trace", help="write trace.csv of the coordinate descent")
    common(p)
    p.set_defaults(func=cmd_trace)
    p = sub.add_parser("simulate", help="Monte-Carlo check, writes sim-report.json")
    common(p)
    p.add_argument("--seed", type=_seed, help="override simulation.seed")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        trace = exc.trace
        detail = f" (last HMSE {trace.steps[-1].hmse:.10g} after {trace.cycles} cycles)" if trace and trace.steps else ""
        print(f"numerical error: {exc}{detail}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
