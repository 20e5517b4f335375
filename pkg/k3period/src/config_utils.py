# k3period/src/config_utils.py
"""
Configuration loading for the K3 period toolkit.

Reads `config/settings.yaml` (tolerances, LLL parameter, enumeration caps,
sampling and logging defaults) and the YAML registries of built-in lattices
and named planes. Environment variables from `.env` are loaded with
python-dotenv; `K3_PERIOD_SEED` and `K3_PERIOD_LOG_DIR` override the YAML
values. Missing or malformed files fall back to the documented defaults and
are reported through the standard `logging` module.

Dependencies:
    - yaml: For configuration parsing.
    - pydantic: For validating the parsed settings.
    - dotenv: For environment variables.

Usage:
    >>> from k3period.src.config_utils import get_settings
    >>> get_settings().tolerance
    1e-09
"""

import logging
import os
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import List

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

load_dotenv()

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"
SETTINGS_PATH = CONFIG_DIR / "settings.yaml"
LATTICES_PATH = CONFIG_DIR / "lattices.yaml"
PLANES_PATH = CONFIG_DIR / "planes.yaml"


class Settings(BaseModel):
    """
    Validated runtime settings.

    Attributes:
        tolerance: Default comparison tolerance for planes and certificates.
        orthonormal_tolerance: Allowed deviation of E·G·Eᵀ from the identity.
        clamp_tolerance: Negative sinh² values above -clamp_tolerance are clamped to zero.
        lll_delta: Lovász parameter as an exact fraction.
        jobs: Default number of enumeration workers.
        orbit_cap: Default cap for orbit exploration.
        functional_bases: Bases tried in order for the ADE positive-root functional.
        entry_bound: Entry range of random plane rows before pushing into the positive cone.
        seed: Sampling seed for the property suites.
        log_dir: Directory of the rotating component logs.
        log_level: Logging level name.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    tolerance: float = Field(1e-9, gt=0)
    orthonormal_tolerance: float = Field(1e-12, gt=0)
    clamp_tolerance: float = Field(1e-10, gt=0)
    lll_delta: Fraction = Fraction(3, 4)
    jobs: int = Field(1, ge=1)
    orbit_cap: int = Field(10000, ge=1)
    functional_bases: List[int] = Field(
        default_factory=lambda: [3, 5, 7, 11, 13, 17, 19, 23, 29, 31], min_length=1
    )
    entry_bound: int = Field(5, ge=1)
    seed: int = 20240601
    log_dir: str = "logs"
    log_level: str = "INFO"

    @field_validator("lll_delta", mode="before")
    def parse_delta(cls, value) -> Fraction:
        """Parse the Lovász parameter from '3/4'-style strings and check 1/4 < delta <= 1."""
        delta = Fraction(str(value))
        if not Fraction(1, 4) < delta <= 1:
            raise ValueError("lll_delta must lie in (1/4, 1]")
        return delta

    @field_validator("log_level")
    def validate_level(cls, value: str) -> str:
        """Validate that the level is a standard logging level name."""
        if value.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown logging level {value}")
        return value.upper()


def _read_yaml(path: Path) -> dict:
    """Read a YAML mapping, returning {} (with a warning) when the file is missing or broken."""
    try:
        with open(path, "r", encoding="utf-8") as file:
            return yaml.safe_load(file) or {}
    except FileNotFoundError:
        logger.warning(f"Config file {path} not found. Using defaults.")
        return {}
    except yaml.YAMLError as e:
        logger.error(f"Error parsing {path}: {e}. Using defaults.")
        return {}


@lru_cache(maxsize=None)
def get_settings(config_path: str = str(SETTINGS_PATH)) -> Settings:
    """
    Load and validate the settings file, applying environment overrides.

    Args:
        config_path (str, optional): Path to the settings YAML. Defaults to config/settings.yaml.

    Returns:
        Settings: The validated settings (cached per path).
    """
    config = _read_yaml(Path(config_path))
    tolerances = config.get("tolerances", {})
    flat = {
        **tolerances,
        "lll_delta": config.get("reduction", {}).get("lll_delta", "3/4"),
        **config.get("enumeration", {}),
        **config.get("root_system", {}),
        "entry_bound": config.get("sampling", {}).get("entry_bound", 5),
        "seed": config.get("sampling", {}).get("seed", 20240601),
        "log_dir": config.get("logging", {}).get("log_dir", "logs"),
        "log_level": config.get("logging", {}).get("level", "INFO"),
    }
    seed = os.getenv("K3_PERIOD_SEED")
    if seed:
        try:
            flat["seed"] = int(seed)
        except ValueError:
            logger.warning(f"Ignoring non-integer K3_PERIOD_SEED '{seed}'")
    log_dir = os.getenv("K3_PERIOD_LOG_DIR")
    if log_dir:
        flat["log_dir"] = log_dir
    return Settings(**flat)


def load_registry(path: Path, key: str) -> List[dict]:
    """
    Load the enabled entries of a YAML registry (config/lattices.yaml, config/planes.yaml).

    Args:
        path (Path): Registry file.
        key (str): Top-level list key ('lattices' or 'planes').

    Returns:
        list[dict]: Entries whose 'enabled' flag is not false.
    """
    config = _read_yaml(path)
    if key not in config:
        logger.error(f"Invalid format in {path}: '{key}' key missing")
        return []
    return [entry for entry in config[key] if entry.get("enabled", True)]
