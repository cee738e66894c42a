"""Configuration parsing, run orchestration and result export."""

from src.cli.config import OutputFormat, ReducedSection, RunConfig, RunMode, load_config, parse_config
from src.cli.runner import run
from src.cli.validation import CheckResult, Scenario, run_validation_suite

__all__ = [
    "CheckResult",
    "OutputFormat",
    "ReducedSection",
    "RunConfig",
    "RunMode",
    "Scenario",
    "load_config",
    "parse_config",
    "run",
    "run_validation_suite",
]
