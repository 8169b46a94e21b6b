"""Runtime configuration for lvadvect.

This module provides the process-level settings that sit outside a scenario:
worker count, sweep cap, log level and CSV number formatting.
"""

import logging
import os
from dataclasses import dataclass

from lvadvect.exceptions import ConfigurationError

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class LabConfig:
    """Lab configuration with sensible defaults.

    Attributes:
        workers: Worker processes for sweeps; None defers to the command line
        sweep_cap: Maximum number of runs a sweep plan may expand to (default: 10000)
        log_level: Root log level name (default: "WARNING")
        float_format: printf-style format for CSV numbers (default: "%.12g")

    Example:
        >>> config = LabConfig(workers=4)
        >>> result = run_sweep(plan, worker_count=config.workers, cap=config.sweep_cap)

    Example (from environment):
        >>> config = LabConfig.from_env()
    """

    workers: int | None = None
    sweep_cap: int = 10_000
    log_level: str = "WARNING"
    float_format: str = "%.12g"

    def __post_init__(self) -> None:
        """Validate configuration after initialization.

        Raises:
            ConfigurationError: If configuration is invalid
        """
        self._validate()

    def _validate(self) -> None:
        if self.workers is not None and self.workers <= 0:
            raise ConfigurationError(f"workers must be positive, got: {self.workers}")

        if self.sweep_cap <= 0:
            raise ConfigurationError(f"sweep_cap must be positive, got: {self.sweep_cap}")

        self.log_level = self.log_level.upper()
        if self.log_level not in _LOG_LEVELS:
            raise ConfigurationError(
                f"log_level must be one of {', '.join(_LOG_LEVELS)}, got: {self.log_level}"
            )

        try:
            self.float_format % 1.0
        except (TypeError, ValueError) as e:
            raise ConfigurationError(
                f"float_format must be a printf-style float format, got: {self.float_format}"
            ) from e

    @property
    def level(self) -> int:
        """Numeric logging level."""
        return int(getattr(logging, self.log_level))

    @classmethod
    def from_env(cls, prefix: str = "LVADVECT_") -> "LabConfig":
        """Load configuration from environment variables.

        Environment variables:
            {prefix}THREADS: Worker processes for sweeps (overrides --workers)
            {prefix}SWEEP_CAP: Maximum sweep size (optional)
            {prefix}LOG_LEVEL: Log level name (optional)
            {prefix}FLOAT_FORMAT: CSV float format (optional)

        Args:
            prefix: Environment variable prefix (default: "LVADVECT_")

        Returns:
            LabConfig instance with values from environment

        Raises:
            ConfigurationError: If a variable cannot be parsed
        """
        workers = _int_from_env(f"{prefix}THREADS")
        sweep_cap = _int_from_env(f"{prefix}SWEEP_CAP")

        return cls(
            workers=workers,
            sweep_cap=sweep_cap if sweep_cap is not None else 10_000,
            log_level=os.getenv(f"{prefix}LOG_LEVEL", "WARNING"),
            float_format=os.getenv(f"{prefix}FLOAT_FORMAT", "%.12g"),
        )

    def copy(self, **changes: object) -> "LabConfig":
        """Create a copy of this config with specified changes.

        Args:
            **changes: Configuration fields to override

        Returns:
            New LabConfig instance with changes applied

        Example:
            >>> config = LabConfig()
            >>> verbose = config.copy(log_level="DEBUG")
        """
        current = {
            "workers": self.workers,
            "sweep_cap": self.sweep_cap,
            "log_level": self.log_level,
            "float_format": self.float_format,
        }
        current.update(changes)
        return LabConfig(**current)  # type: ignore


def _int_from_env(name: str) -> int | None:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(
            f"Environment variable {name} must be an integer, got: {raw}"
        ) from e
