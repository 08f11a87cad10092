"""
Settings for cohomforge

This module provides a singleton settings object read from the environment
(and an optional .env file), plus the size guards every builder consults.
"""

import os
import sys
import logging
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

DEFAULT_MAX_BASIS = 1_000_000
DEFAULT_MAX_COCHAIN_COORDINATES = 20_000

# Global settings instance
_settings: Optional["Settings"] = None


class SizeGuardError(ValueError):
    """Raised when a construction would exceed a configured size limit."""

    def __init__(self, what: str, dimension: int, limit: int, flag: str = "--max-basis"):
        self.what = what
        self.dimension = dimension
        self.limit = limit
        self.flag = flag
        super().__init__(
            f"{what} needs {dimension} basis elements, above the limit {limit}; "
            f"raise it with {flag}"
        )


@dataclass
class Settings:
    """Runtime configuration for all computations."""

    max_basis: int = DEFAULT_MAX_BASIS
    max_cochain_coordinates: int = DEFAULT_MAX_COCHAIN_COORDINATES
    threads: int = 1
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    def check_basis(self, what: str, dimension: int) -> None:
        """Raise SizeGuardError if a based module would be too large."""
        if dimension > self.max_basis:
            raise SizeGuardError(what, dimension, self.max_basis)

    def check_cochain_coordinates(self, what: str, dimension: int) -> None:
        """Gate the explicit cochain route, which grows as |G|^n."""
        if dimension > self.max_cochain_coordinates:
            raise SizeGuardError(what, dimension, self.max_cochain_coordinates, flag="COHOMFORGE_MAX_COCHAIN_COORDS")


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def get_settings() -> Settings:
    """
    Get or create the settings instance

    Returns:
        Settings read from COHOMFORGE_* environment variables

    Raises:
        ValueError: If a numeric variable is malformed
    """
    global _settings

    if _settings is not None:
        return _settings

    load_dotenv()

    _settings = Settings(
        max_basis=_int_from_env("COHOMFORGE_MAX_BASIS", DEFAULT_MAX_BASIS),
        max_cochain_coordinates=_int_from_env("COHOMFORGE_MAX_COCHAIN_COORDS", DEFAULT_MAX_COCHAIN_COORDINATES),
        threads=_int_from_env("COHOMFORGE_THREADS", 1),
        log_level=os.getenv("COHOMFORGE_LOG_LEVEL", "WARNING").upper(),
        log_file=os.getenv("COHOMFORGE_LOG_FILE") or None,
    )
    return _settings


def reset_settings() -> None:
    """Forget the cached settings (tests change the environment)."""
    global _settings
    _settings = None


def configure_logging(settings: Settings) -> None:
    """Configure logging to stderr and, optionally, a log file."""
    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        log_dir = os.path.dirname(settings.log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(settings.log_file))

    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
        handlers=handlers,
        force=True,
    )
