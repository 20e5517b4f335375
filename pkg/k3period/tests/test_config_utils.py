# k3period/tests/test_config_utils.py
from fractions import Fraction

import pytest
from pydantic import ValidationError

from k3period.src.config_utils import (
    LATTICES_PATH,
    PLANES_PATH,
    Settings,
    get_settings,
    load_registry,
)


@pytest.fixture
def fresh_settings():
    """Fixture clearing the settings cache before and after a test."""
    get_settings.cache_clear()
    yield get_settings
    get_settings.cache_clear()


def test_settings_defaults():
    """Test the values shipped in config/settings.yaml."""
    settings = get_settings()
    assert settings.tolerance == 1e-9
    assert settings.lll_delta == Fraction(3, 4)
    assert settings.jobs == 1
    assert settings.orbit_cap == 10000
    assert settings.functional_bases[0] == 3


def test_seed_override(monkeypatch, fresh_settings):
    """Test that K3_PERIOD_SEED overrides the configured seed."""
    monkeypatch.setenv("K3_PERIOD_SEED", "7")
    assert fresh_settings().seed == 7


def test_seed_override_ignores_garbage(monkeypatch, fresh_settings):
    """Test that a non-integer K3_PERIOD_SEED falls back to the YAML value."""
    monkeypatch.setenv("K3_PERIOD_SEED", "seven")
    assert fresh_settings().seed == 20240601


def test_missing_settings_file(tmp_path, fresh_settings):
    """Test that a missing file falls back to the defaults."""
    settings = fresh_settings(str(tmp_path / "missing.yaml"))
    assert settings.tolerance == 1e-9
    assert settings.entry_bound == 5


def test_settings_file_override(tmp_path, fresh_settings):
    """Test reading tolerances and the LLL parameter from a custom file."""
    path = tmp_path / "settings.yaml"
    path.write_text('tolerances:\n  tolerance: 1.0e-6\nreduction:\n  lll_delta: "99/100"\n')
    settings = fresh_settings(str(path))
    assert settings.tolerance == 1e-6
    assert settings.lll_delta == Fraction(99, 100)


@pytest.mark.parametrize(
    "field, value",
    [
        ("lll_delta", "1/8"),
        ("tolerance", 0),
        ("jobs", 0),
        ("log_level", "LOUD"),
    ],
)
def test_settings_validation(field, value):
    """Test that out-of-range settings are rejected."""
    with pytest.raises(ValidationError):
        Settings(**{field: value})


def test_load_registry():
    """Test that both registries load their enabled entries."""
    lattices = [entry["name"] for entry in load_registry(LATTICES_PATH, "lattices")]
    assert lattices[0] == "k3"
    planes = [entry["name"] for entry in load_registry(PLANES_PATH, "planes")]
    assert planes[:3] == ["p0", "p1", "smooth"]


def test_load_registry_missing_key(tmp_path):
    """Test that a registry without its top-level key is empty."""
    path = tmp_path / "empty.yaml"
    path.write_text("other: []\n")
    assert load_registry(path, "planes") == []


def test_load_registry_skips_disabled(tmp_path):
    """Test that entries with enabled: false are skipped."""
    path = tmp_path / "planes.yaml"
    path.write_text('planes:\n  - name: "a"\n  - name: "b"\n    enabled: false\n')
    assert [entry["name"] for entry in load_registry(path, "planes")] == ["a"]
