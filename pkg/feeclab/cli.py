"""Command-line entry point: ``feeclab <command> [--config FILE] [--key value ...]``."""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from typing import Any, Optional

from feeclab.core.exceptions import FeecLabError, ValidationError
from feeclab.studies.commands import (
    StudyResult,
    cmd_abstract,
    cmd_eigen,
    cmd_geom,
    cmd_mesh,
    cmd_solve,
    cmd_study,
)
from feeclab.studies.config import StudyConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3
COMMANDS = ("mesh", "geom", "solve", "study", "eigen", "abstract")
CONFIG_FLAGS = (
    "surface", "k", "s", "r", "levels", "ell", "quad-degree", "seed", "out", "format",
    "min-level", "nev", "trials", "exact-geometry", "max-concurrent", "project-load",
)  # fmt: skip


def build_parser() -> argparse.ArgumentParser:
    """Argument parser; every configuration key has a flag of the same name."""
    parser = argparse.ArgumentParser(
        prog="feeclab", description="Variational-crime studies for surface FEEC."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--level", type=int, default=None, help="level for the solve command")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    for flag in CONFIG_FLAGS:
        parser.add_argument(f"--{flag}", dest=flag.replace("-", "_"), default=None)
    return parser


def load_config(args: argparse.Namespace) -> StudyConfig:
    """Configuration file (if any) overridden by the flags given."""
    config = StudyConfig.from_file(args.config) if args.config else StudyConfig()
    overrides = {flag.replace("-", "_"): getattr(args, flag.replace("-", "_"))
                 for flag in CONFIG_FLAGS}
    return config.with_overrides(**overrides)


def _emit(document: Any) -> None:
    sys.stdout.write(json.dumps(document, indent=2) + "\n")


def _emit_study(config: StudyConfig, result: StudyResult) -> int:
    if config.out is None:
        if config.format == "csv":
            sys.stdout.write(result.table.to_csv())
        else:
            _emit(result.table.to_dict())
        _emit(result.verdict.to_dict())
    return EXIT_OK if result.passed else EXIT_VERDICT


def run(args: argparse.Namespace) -> int:
    """Execute a parsed command and return its exit code."""
    config = load_config(args)
    if args.command == "mesh":
        for summary in cmd_mesh(config):
            _emit(summary)
        return EXIT_OK
    if args.command == "solve":
        if args.level is None:
            raise ValidationError("level", "the solve command needs --level")
        result = cmd_solve(config, args.level)
        if config.out is None:
            _emit({"row": result.to_dict()["row"], "crime": result.crime.to_dict()})
        return EXIT_OK
    if args.command == "abstract":
        report = cmd_abstract(config)
        _emit(report.to_dict())
        return EXIT_OK if report.passed else EXIT_VERDICT
    commands = {"geom": cmd_geom, "study": cmd_study, "eigen": cmd_eigen}
    return _emit_study(config, commands[args.command](config))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI.

    Returns
    -------
        0 on success, 1 when a verdict fails, 2 on usage errors, 3 on runtime errors

    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    try:
        return run(args)
    except ValidationError as e:
        logger.error("%s", e.message)
        return EXIT_USAGE
    except (FeecLabError, OSError) as e:
        logger.error("%s", e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
