"""Command-line entry point: `python -m src.cli <mode> --config ...`."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from config import settings
from src.cli.config import OutputFormat, RunMode, load_config, parse_config
from src.cli.runner import EXIT_FAILURE, run
from src.core.errors import ConfigError, ConfigValidationError, PolaritonError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polariton",
        description="Light storage in inhomogeneously broadened solids: simulation and feasibility",
    )
    parser.add_argument("mode", choices=[m.value for m in RunMode], help="What to run")
    parser.add_argument("--config", type=Path, default=None, help="YAML run configuration")
    parser.add_argument("--output", type=Path, default=None, help="Output directory (overrides the config)")
    parser.add_argument("--workers", type=int, default=None, help="Thread cap for the ensemble update")
    parser.add_argument("--format", dest="formats", default=None, help="Comma-separated subset of csv,json")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    return parser


def configure_logging(verbose: bool = False) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose or settings.debug else settings.log_level)


def _formats(value: str) -> List[OutputFormat]:
    try:
        return [OutputFormat(part.strip()) for part in value.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigValidationError(f"--format: {e}", ["formats"]) from e


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, load the configuration and run it.

    Returns:
        Process exit code: 0 success, 1 run failure, 3-6 configuration errors
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        if args.config is None:
            config = load_config({}, args.mode)
        else:
            config = parse_config(args.config, args.mode)
        updates = {}
        if args.output is not None:
            updates["output"] = args.output
        if args.formats is not None:
            updates["formats"] = _formats(args.formats)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigValidationError("--workers must be at least 1", ["workers"])
            updates["workers"] = args.workers
        if updates:
            config = config.model_copy(update=updates)
    except ConfigError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code

    try:
        return run(config)
    except PolaritonError as e:
        logger.error(f"Run failed: {type(e).__name__}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
