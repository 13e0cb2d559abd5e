"""
Capillary Lab Application

This is the main application module for the capillary graph lab.
It provides a command-line interface for running single scenarios and the
bundled scenario suite.
"""

import os
import sys
import logging
import argparse
from dataclasses import replace
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Any, Optional, Sequence

from dotenv import load_dotenv

from config.config_manager import (COMMANDS, Scenario, get_config_manager, parse_assignment,
                                   parse_tolerances, parse_value)
from scenario_engine import EXIT_CONFIG, EXIT_PASS, run_scenario
from utils.error_utils import ArgumentError, ConfigurationError
from utils.logging_utils import parse_log_level, setup_logging

logger = logging.getLogger(__name__)

def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with one subcommand per scenario command.

    Returns:
        The configured parser
    """
    parser = argparse.ArgumentParser(
        prog="capillary_lab",
        description="Numerical laboratory for capillary graphs with constant mean curvature.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="DIR", help="Root directory of the artifacts")
    common.add_argument("--tol", metavar="KEY=VAL", action="append", default=[],
                        help="Override a named tolerance")
    common.add_argument("--jobs", type=int, default=1, help="Scenarios run in parallel")
    common.add_argument("--log-level", metavar="LEVEL", help="Console and file log level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command, actions in COMMANDS.items():
        sub = subparsers.add_parser(command, parents=[common], help=f"{command} scenarios")
        sub.add_argument("action", choices=actions)
        sub.add_argument("--config", metavar="PATH", action="append", default=[],
                         help="Scenario file (repeatable)")
        sub.add_argument("--set", metavar="KEY=VAL", action="append", default=[],
                         help="Set or override a scenario input")
        sub.add_argument("--name", help="Scenario name (output subdirectory)")
        sub.add_argument("--refine", metavar="N1,N2,...",
                         help="Grid sizes of a refinement study")

    batch = subparsers.add_parser("batch", parents=[common], help="Run several scenarios")
    batch.add_argument("--config", metavar="PATH", action="append", default=[],
                       help="Scenario file (repeatable); all bundled scenarios by default")
    return parser

def scenarios_from_args(args: argparse.Namespace, tolerances: Dict[str, float]) -> List[Scenario]:
    """
    Assemble the scenarios of a single-command run: one per ``--config``
    file, or one inline scenario built from ``--set`` when no file is given.

    Raises:
        ConfigurationError: On malformed overrides, a file of another command
            or ``--name`` given with several files
    """
    config_manager = get_config_manager()
    if args.name and len(args.config) > 1:
        raise ConfigurationError("--name needs a single scenario file", {"files": len(args.config)})

    if args.config:
        scenarios = []
        for path in args.config:
            scenario = config_manager.load_scenario(path)
            if (scenario.command, scenario.action) != (args.command, args.action):
                raise ConfigurationError(
                    "Scenario file is for another command",
                    {"path": path, "file": f"{scenario.command} {scenario.action}",
                     "requested": f"{args.command} {args.action}"},
                )
            scenarios.append(scenario)
    else:
        name = args.name or f"{args.command}_{args.action}".replace("-", "_")
        scenarios = [Scenario(name, args.command, args.action)]

    inputs: Dict[str, Any] = {}
    for item in args.set:
        key, value = parse_assignment(item, "--set")
        inputs[key] = parse_value(value)
    if args.refine:
        inputs["refine"] = [parse_value(size) for size in args.refine.split(",") if size.strip()]
    scenarios = [s.with_overrides(inputs=inputs, tolerances=tolerances, output_dir=args.out)
                 for s in scenarios]
    if args.name:
        scenarios = [replace(scenarios[0], name=args.name)]
    return scenarios

def run_batch(scenarios: Sequence[Scenario], jobs: int, log_dir: Optional[str]) -> int:
    """
    Run scenarios sequentially or in a process pool.

    Every scenario writes into its own output subdirectory.

    Returns:
        The largest exit status
    """
    if jobs < 1:
        raise ArgumentError("--jobs must be >= 1", {"jobs": jobs})
    outcomes = []
    if jobs == 1:
        for scenario in scenarios:
            outcomes.append(run_scenario(scenario, log_dir=log_dir))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(run_scenario, scenario, None, log_dir) for scenario in scenarios]
            outcomes = [future.result() for future in futures]

    for name, exit_code, status in outcomes:
        print(f"{name}: {status}")
    failed = [name for name, exit_code, _ in outcomes if exit_code != EXIT_PASS]
    logger.info(f"Batch finished: {len(outcomes) - len(failed)} passed, {len(failed)} not passed")
    return max((exit_code for _, exit_code, _ in outcomes), default=EXIT_PASS)

def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the command-line interface.

    Args:
        argv: Arguments without the program name (sys.argv by default)

    Returns:
        Exit status: 0 pass, 1 failure or skip, 2 configuration error
    """
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    config_manager = get_config_manager()
    try:
        settings = config_manager.load_settings()
    except ConfigurationError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    log_dir = settings["logging"]["log_dir"]
    setup_logging(log_dir=log_dir,
                  log_level=parse_log_level(args.log_level or settings["logging"]["log_level"]),
                  app_name="capillary_lab")

    try:
        overrides = dict(parse_assignment(item, "--tol") for item in args.tol)
        tolerances = parse_tolerances(overrides, "--tol")
        if args.jobs < 1:
            raise ArgumentError("--jobs must be >= 1", {"jobs": args.jobs})
        if args.command == "batch":
            if args.config:
                scenarios = [config_manager.load_scenario(path) for path in args.config]
            else:
                scenarios = list(config_manager.load_scenarios().values())
            scenarios = [s.with_overrides(tolerances=tolerances, output_dir=args.out) for s in scenarios]
        else:
            scenarios = scenarios_from_args(args, tolerances)
    except (ConfigurationError, ArgumentError) as e:
        logger.error(f"{e.__class__.__name__}: {e}")
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "batch" or len(scenarios) > 1:
        return run_batch(scenarios, args.jobs, log_dir)

    scenario = scenarios[0]
    name, exit_code, status = run_scenario(scenario, log_dir=log_dir)
    output_dir = scenario.output_dir or settings["output"]["output_dir"]
    print(f"{name}: {status} ({os.path.join(output_dir, name, 'result.json')})")
    return exit_code

if __name__ == "__main__":
    sys.exit(main())
