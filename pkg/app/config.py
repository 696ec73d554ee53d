"""
Settings for enumeration caps, the vertex-search fallback and logging.
Handles defaults, the optional quotamatch.toml file and validated updates.
"""
from typing import Any, Dict, Optional
import os

import toml

from .errors import SettingsError

# File paths
SETTINGS_FILE = 'quotamatch.toml'

LOG_LEVELS = ("DEBUG", "INFO", "WARN", "ERROR")

# Factory defaults
SETTINGS_DEFAULTS = {
    "enum_cap": 2 ** 20,              # Largest 2^|W| for feasible-set enumeration
    "assign_cap": 10 ** 7,            # Largest (|F|+1)^|W| for assignment enumeration
    "fallback_vertex_search": True,   # Search for an integral optimum at fractional vertices
    "max_fractional": 12,             # Fractional coordinates the search will branch on
    "log_level": "WARN",
}

# Validation bounds for numeric settings
# Format: name: (min_value, max_value, unit, description)
SETTINGS_BOUNDS = {
    "enum_cap": (1, 2 ** 30, "subsets", "Feasible-set enumeration cap"),
    "assign_cap": (1, 10 ** 12, "assignments", "Assignment enumeration cap"),
    "max_fractional": (0, 20, "coordinates", "Vertex search branching bound"),
}


def _parse_bool(value: Any) -> Optional[bool]:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    return None


def validate_and_update_setting(name: str, value: Any, table: Dict[str, Any]) -> tuple[bool, str]:
    """
    Validates a setting against its bounds before updating the table.

    Why:
        Caps bound the size of brute-force enumerations; a typo in a
        settings file or flag must not silently allow a run that never
        finishes or disable the caps altogether.

    Args:
        name: Setting name (must be in SETTINGS_DEFAULTS)
        value: New value, native (from TOML) or text (from the command line)
        table: Current settings (modified on success only)

    Returns:
        (True, "Updated ...") on success
        (False, reason) for an unknown name, unparsable value or out-of-range value

    Example:
        >>> table = dict(SETTINGS_DEFAULTS)
        >>> validate_and_update_setting("enum_cap", "4096", table)[0]
        True
        >>> validate_and_update_setting("enum_cap", "0", table)
        (False, 'enum_cap out of range 1-1073741824 subsets')
    """
    if name not in SETTINGS_DEFAULTS:
        return (False, f"{name} unknown (not a setting)")

    if name == "fallback_vertex_search":
        parsed = _parse_bool(value)
        if parsed is None:
            return (False, f"{name} invalid value '{value}' (not a boolean)")
    elif name == "log_level":
        parsed = str(value).strip().upper()
        if parsed not in LOG_LEVELS:
            return (False, f"{name} invalid value '{value}' (one of {', '.join(LOG_LEVELS)})")
    else:
        if isinstance(value, bool):
            return (False, f"{name} invalid value '{value}' (not an integer)")
        try:
            parsed = int(str(value).strip())
        except ValueError:
            return (False, f"{name} invalid value '{value}' (not an integer)")
        min_val, max_val, unit, _ = SETTINGS_BOUNDS[name]
        if not min_val <= parsed <= max_val:
            return (False, f"{name} out of range {min_val}-{max_val} {unit}")

    old_value = table.get(name, "unset")
    table[name] = parsed
    return (True, f"Updated {name} from {old_value} to {parsed}")


def load_settings(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Defaults overlaid with a TOML settings file.

    Args:
        path: Settings file; None reads quotamatch.toml from the working
            directory when it exists

    Returns:
        Dictionary of all settings

    Raises:
        FileNotFoundError: An explicit path does not exist
        toml.TomlDecodeError: The file is not valid TOML
        SettingsError: An entry is unknown or out of range

    Example:
        >>> load_settings()["assign_cap"]
        10000000
    """
    settings = dict(SETTINGS_DEFAULTS)
    if path is None:
        if not os.path.exists(SETTINGS_FILE):
            return settings
        path = SETTINGS_FILE
    with open(path, 'r', encoding='utf-8') as f:
        data = toml.load(f)
    for name, value in data.items():
        ok, message = validate_and_update_setting(name, value, settings)
        if not ok:
            raise SettingsError(f"{path}: {message}")
    return settings


def save_settings(settings: Dict[str, Any], path: str = SETTINGS_FILE) -> None:
    """
    Writes settings back as TOML.

    Raises:
        TypeError: settings is not a dictionary
    """
    if not isinstance(settings, dict):
        raise TypeError(f"settings must be dict, got {type(settings)}")
    with open(path, 'w', encoding='utf-8') as f:
        toml.dump(settings, f)
