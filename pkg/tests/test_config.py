"""
Unit tests for config.py module.
Tests settings defaults, the TOML settings file and validated updates.
"""
import pytest
import toml

from app.config import (SETTINGS_BOUNDS, SETTINGS_DEFAULTS, SETTINGS_FILE, load_settings,
                        save_settings, validate_and_update_setting)
from app.errors import SettingsError


@pytest.fixture
def temp_config_dir(tmp_path, monkeypatch):
    """
    Creates temporary directory for settings files.

    Why: Tests should not pick up or modify a real quotamatch.toml.
    """
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_defaults_without_settings_file(temp_config_dir):
    """
    Tests that missing quotamatch.toml yields the factory defaults.

    Why: The tool must run out of the box.
    """
    settings = load_settings()

    assert settings == SETTINGS_DEFAULTS
    assert settings is not SETTINGS_DEFAULTS


def test_default_file_overrides(temp_config_dir):
    (temp_config_dir / SETTINGS_FILE).write_text('enum_cap = 4096\nlog_level = "debug"\n',
                                                 encoding='utf-8')
    settings = load_settings()

    assert settings["enum_cap"] == 4096
    assert settings["log_level"] == "DEBUG"
    assert settings["assign_cap"] == SETTINGS_DEFAULTS["assign_cap"]


def test_explicit_path_must_exist(temp_config_dir):
    with pytest.raises(FileNotFoundError):
        load_settings(str(temp_config_dir / "missing.toml"))


def test_save_and_reload(temp_config_dir):
    """
    Tests that saved settings read back unchanged.

    Why: Users may persist tuned caps with save_settings.
    """
    settings = dict(SETTINGS_DEFAULTS, max_fractional=5, fallback_vertex_search=False)
    save_settings(settings)

    assert toml.load(SETTINGS_FILE)["max_fractional"] == 5
    assert load_settings() == settings


def test_save_rejects_non_dict(temp_config_dir):
    with pytest.raises(TypeError):
        save_settings([("enum_cap", 1)])


def test_unknown_entry_in_file(temp_config_dir):
    (temp_config_dir / SETTINGS_FILE).write_text("colour = true\n", encoding='utf-8')
    with pytest.raises(SettingsError) as info:
        load_settings()
    assert "colour unknown" in str(info.value)


def test_defaults_within_bounds():
    """
    Tests every numeric default against its bounds.

    Why: A default outside its own bounds could never be set back.
    """
    for name, (low, high, unit, description) in SETTINGS_BOUNDS.items():
        assert low <= SETTINGS_DEFAULTS[name] <= high, name
        assert unit and description


def test_validate_setting_valid_update():
    table = dict(SETTINGS_DEFAULTS)
    success, message = validate_and_update_setting("assign_cap", "1000", table)

    assert success
    assert table["assign_cap"] == 1000
    assert message == "Updated assign_cap from 10000000 to 1000"


@pytest.mark.parametrize("name, value, fragment", [
    ("enum_cap", "0", "out of range"),
    ("enum_cap", str(2 ** 31), "out of range"),
    ("max_fractional", "21", "out of range"),
    ("assign_cap", "ten", "not an integer"),
    ("assign_cap", True, "not an integer"),
    ("fallback_vertex_search", "maybe", "not a boolean"),
    ("log_level", "LOUD", "one of"),
    ("colour", "red", "unknown"),
])
def test_validate_setting_rejections(name, value, fragment):
    """
    Tests out-of-range, unparsable and unknown values.

    Why: Caps bound exponential enumerations and must never be disabled by a typo.
    """
    table = dict(SETTINGS_DEFAULTS)
    success, message = validate_and_update_setting(name, value, table)

    assert not success
    assert fragment in message
    assert table == SETTINGS_DEFAULTS


def test_validate_setting_boundary_values():
    table = dict(SETTINGS_DEFAULTS)

    assert validate_and_update_setting("max_fractional", "0", table)[0]
    assert validate_and_update_setting("max_fractional", "20", table)[0]
    assert validate_and_update_setting("enum_cap", 1, table)[0]


@pytest.mark.parametrize("value, expected", [
    ("yes", True), ("0", False), (True, True), ("Off", False),
])
def test_validate_setting_booleans(value, expected):
    table = dict(SETTINGS_DEFAULTS)
    assert validate_and_update_setting("fallback_vertex_search", value, table)[0]
    assert table["fallback_vertex_search"] is expected
