"""
Shared test fixtures for the cover-arithmetic test suite.

Provides:
- Settings: a clean environment and settings cache around every test
- Rationals: factories for factored rationals and tuples
- Presentations: factories for cover presentations with chosen roots
"""

import os

import pytest

from src.core.cover import CoverGenerator, CoverPresentation
from src.core.rational_multiplicative import factor
from src.service.config import ENV_PREFIX, get_settings


# =============================================================================
# Settings Fixtures
# =============================================================================


@pytest.fixture(autouse=True)
def clean_settings():
    """Restore COVER_ARITH_* variables and drop cached settings around each test."""
    saved = {k: v for k, v in os.environ.items() if k.startswith(ENV_PREFIX)}
    for k in saved:
        del os.environ[k]
    get_settings.cache_clear()
    yield
    for k in [k for k in os.environ if k.startswith(ENV_PREFIX)]:
        del os.environ[k]
    os.environ.update(saved)
    get_settings.cache_clear()


# =============================================================================
# Rational Fixtures
# =============================================================================


@pytest.fixture
def rationals():
    """Factory turning integers or "num/den" strings into a tuple of factored rationals."""

    def _create(*values):
        return tuple(factor(v) for v in values)

    return _create


# =============================================================================
# Presentation Fixtures
# =============================================================================


@pytest.fixture
def presentation():
    """
    Factory for cover presentations.

    Generators are given as name=base for algebraic generators or
    name="@symbol" for formal transcendentals; `choices` maps a generator name
    to its recorded root twists.
    """

    def _create(choices=None, level=1, period=1, **generators):
        gens = []
        for name, value in generators.items():
            if isinstance(value, str) and value.startswith("@"):
                gens.append(CoverGenerator(name, symbol=value[1:]))
            else:
                gens.append(CoverGenerator(name, base=factor(value)))
        return CoverPresentation.create(
            gens, choices or {}, kernel_period=period, root_of_unity_level=level
        )

    return _create
