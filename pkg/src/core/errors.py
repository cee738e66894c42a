"""Exception hierarchy shared by every simulator package."""

from typing import List, Optional


class PolaritonError(Exception):
    """Base class for simulator errors."""


class DomainError(PolaritonError, ValueError):
    """A numeric argument lies outside the domain of an operation."""


class SingularInputError(DomainError):
    """The operation divides by a quantity that is zero for this input."""


class NumericalInstabilityError(PolaritonError):
    """Integration produced NaN or overflow."""

    def __init__(self, message: str, time: float, cell: int):
        """
        Create an instability error.

        Args:
            message: Diagnostic text
            time: Simulation time (s) at which the problem was detected
            cell: Spatial cell index of the first non-finite value
        """
        super().__init__(f"{message} (t={time:.6e} s, cell={cell})")
        self.time = time
        self.cell = cell


class ConfigError(PolaritonError):
    """Base class for run-configuration problems. Each subclass owns an exit code."""

    exit_code = 1

    def __init__(self, message: str, key_paths: Optional[List[str]] = None):
        super().__init__(message)
        self.key_paths = key_paths or []


class ConfigFileNotFoundError(ConfigError):
    exit_code = 3


class ConfigSyntaxError(ConfigError):
    exit_code = 4


class ConfigUnknownKeyError(ConfigError):
    exit_code = 5


class ConfigValidationError(ConfigError):
    exit_code = 6
