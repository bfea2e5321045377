"""Configuration constants for hibicone.

This module centralizes all configuration values to make it easier
to maintain and modify search limits, parallelism and output formatting.
"""
import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv

from hibicone.errors import ConfigError


@dataclass(frozen=True)
class SearchConfig:
    """Limits for graph searches and oracle sweeps."""

    graph_cap: int = 10_000
    oracle_margin: int = 1


@dataclass(frozen=True)
class ParallelConfig:
    """Data-parallel sweep configuration."""

    jobs: int = 1
    alcove_chunk: int = 50_000


@dataclass(frozen=True)
class OutputConfig:
    """Output document configuration."""

    decimal_places: int = 6
    csv_columns: tuple[str, ...] = ("class", "volume", "approx")
    conic_csv_columns: tuple[str, ...] = ("class", "strict", "weak", "cell")
    default_format: str = "json"


@dataclass(frozen=True)
class CheckConfig:
    """Property-suite configuration."""

    tree_samples: int = 3
    tree_seed: int = 2024


@dataclass(frozen=True)
class PosetConfig:
    """Labels reserved for the augmented poset."""

    bottom_label: str = "0̂"
    top_label: str = "1̂"
    edge_prefix: str = "e"


# Singleton instances for easy importing
SEARCH = SearchConfig()
PARALLEL = ParallelConfig()
OUTPUT = OutputConfig()
CHECK = CheckConfig()
POSET = PosetConfig()


def _positive_int(name: str, raw: str) -> int:
    """
    Parse a positive integer setting.

    Args:
        name: Setting name, used in the error message
        raw: Raw string value

    Returns:
        The parsed integer

    Raises:
        ConfigError: If the value is not a positive integer
    """
    try:
        value = int(raw.strip())
    except ValueError as e:
        raise ConfigError(f"{name} must be a positive integer, got {raw!r}") from e
    if value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {raw!r}")
    return value


def load_settings() -> tuple[SearchConfig, ParallelConfig]:
    """
    Load search and parallelism settings from the environment.

    Values come from a .env file (local) or the process environment,
    falling back to the dataclass defaults.

    Returns:
        Search and parallel configuration

    Raises:
        ConfigError: If HIBI_JOBS or HIBI_GRAPH_CAP is malformed
    """
    load_dotenv()
    search, parallel = SEARCH, PARALLEL

    jobs = os.getenv("HIBI_JOBS")
    if jobs:
        parallel = replace(parallel, jobs=_positive_int("HIBI_JOBS", jobs))

    cap = os.getenv("HIBI_GRAPH_CAP")
    if cap:
        search = replace(search, graph_cap=_positive_int("HIBI_GRAPH_CAP", cap))

    return search, parallel
