"""
Configuration settings for cover-arithmetic.

Budgets bound every materialization the library performs: factorization size,
cyclotomic conductors, root denominators and Galois-orbit enumeration.
"""

import logging
import os
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field

APP_VERSION = "0.1.0"
ENV_PREFIX = "COVER_ARITH_"


def _env_int(name: str, default: int):
    return lambda: int(os.getenv(ENV_PREFIX + name, str(default)))


class Settings(BaseModel):
    """
    Application settings for cover-arithmetic.
    """

    model_config = ConfigDict(validate_default=True)

    app_name: str = "cover-arithmetic"
    app_description: str = (
        "Exact arithmetic for multiplicative lattices, Kummer degrees and covers "
        "of the multiplicative group"
    )
    api_version: str = APP_VERSION
    log_level: str = Field(
        default_factory=lambda: os.getenv(ENV_PREFIX + "LOG_LEVEL", "WARNING"),
        description="Logging level for the application",
    )

    # Budgets
    budget_factor: int = Field(
        default_factory=_env_int("BUDGET_FACTOR", 256),
        gt=0,
        description="Maximum bit length of a numerator or denominator to factor",
    )
    budget_conductor: int = Field(
        default_factory=_env_int("BUDGET_CONDUCTOR", 512),
        gt=0,
        description="Largest cyclotomic conductor that may be materialized",
    )
    budget_denominator: int = Field(
        default_factory=_env_int("BUDGET_DENOMINATOR", 64),
        gt=0,
        description="Largest root denominator materialized in cover presentations",
    )
    budget_orbit: int = Field(
        default_factory=_env_int("BUDGET_ORBIT", 4096),
        gt=0,
        description="Step budget for Galois-orbit enumeration",
    )

    def budgets(self) -> dict[str, int]:
        """The budget fields, echoed in command output."""
        return {
            "factor": self.budget_factor,
            "conductor": self.budget_conductor,
            "denominator": self.budget_denominator,
            "orbit": self.budget_orbit,
        }


@lru_cache()
def get_settings() -> Settings:
    """
    Get the application settings.

    Uses lru_cache so the environment is read once per process; call
    ``get_settings.cache_clear()`` after changing the environment.
    """
    return Settings()


def configure_logging(settings: Settings | None = None):
    """Configure logging for the application."""
    settings = settings or get_settings()
    log_level = getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    if settings.log_level.upper() not in logging.getLevelNamesMapping():
        logging.warning(
            "Unrecognized log level '%s'. Falling back to 'INFO'.",
            settings.log_level,
        )


def apply_overrides(**overrides: int | str | None) -> Settings:
    """
    Apply command-line overrides through the environment and reload settings.

    Unset (None) overrides leave the environment untouched.
    """
    for key, value in overrides.items():
        if value is not None:
            os.environ[ENV_PREFIX + key.upper()] = str(value)
    get_settings.cache_clear()
    return get_settings()
