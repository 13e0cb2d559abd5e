"""
Configuration Manager Module

This module reads the lab configuration: INI scenario files, the named
tolerances the checks compare against and the JSON application settings.
"""

import os
import json
import logging
import configparser
from dataclasses import dataclass, field, replace
from typing import Dict, List, Any, Optional

from utils.error_utils import ConfigurationError

logger = logging.getLogger(__name__)

COMMANDS: Dict[str, List[str]] = {
    "params": ["check", "menu", "perturb"],
    "exact": ["eval", "residual", "ode"],
    "solve": ["slab", "radial"],
    "verify": ["kato", "boundary", "picone", "poincare", "jacobi", "gradient-bound", "z"],
    "parabolic": ["check"],
}

DEFAULT_TOLERANCES: Dict[str, float] = {
    "cmc_tol": 1e-4,
    "newton_tol": 1e-8,
    "gradient_num_tol": 1e-6,
    "identity_h2_factor": 50.0,
    "poincare_h2_factor": 10.0,
    "profile_residual_tol": 1e-8,
    "ode_tol": 1e-7,
    "solver_error_tol": 1e-6,
    "z_slack_tol": 1e-6,
    "parabolic_fit_tol": 0.05,
    "boundary_constancy_tol": 1e-8,
}

ENV_OVERRIDES = {
    "CAPLAB_OUTPUT_DIR": ("output", "output_dir"),
    "CAPLAB_LOG_DIR": ("logging", "log_dir"),
    "CAPLAB_LOG_LEVEL": ("logging", "log_level"),
}

@dataclass(frozen=True)
class Scenario:
    """A fully specified run: command, action, inputs and tolerances."""
    name: str
    command: str
    action: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    output_dir: Optional[str] = None
    source: Optional[str] = None

    def with_overrides(self, inputs: Optional[Dict[str, Any]] = None,
                       tolerances: Optional[Dict[str, float]] = None,
                       output_dir: Optional[str] = None) -> "Scenario":
        """Copy of the scenario with input, tolerance or output overrides applied."""
        merged_inputs = dict(self.inputs)
        merged_inputs.update(inputs or {})
        merged_tols = dict(self.tolerances)
        merged_tols.update(tolerances or {})
        return replace(self, inputs=merged_inputs, tolerances=merged_tols,
                       output_dir=output_dir if output_dir is not None else self.output_dir)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "command": self.command, "action": self.action,
                "inputs": dict(self.inputs), "tolerances": dict(self.tolerances)}

def parse_value(text: str) -> Any:
    """
    Convert an INI or command-line value to bool, int, float, list or string.

    Comma-separated values become lists of converted items.
    """
    raw = text.strip()
    if "," in raw:
        return [parse_value(item) for item in raw.split(",") if item.strip()]
    lowered = raw.lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    for convert in (int, float):
        try:
            return convert(raw)
        except ValueError:
            continue
    return raw

def parse_assignment(text: str, option: str) -> tuple:
    """Split a KEY=VAL command-line override."""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ConfigurationError(f"Expected KEY=VAL for {option}", {"got": text})
    return key.strip(), value

def parse_tolerances(items: Dict[str, str], where: str) -> Dict[str, float]:
    """
    Validate named tolerance overrides.

    Args:
        items: Raw key → value text
        where: Origin for diagnostics (file section or CLI option)

    Returns:
        Tolerances as floats

    Raises:
        ConfigurationError: On unknown names or values that are not positive numbers
    """
    tolerances = {}
    for key, value in items.items():
        if key not in DEFAULT_TOLERANCES:
            raise ConfigurationError(f"Unknown tolerance '{key}'",
                                     {"where": where, "known": ",".join(sorted(DEFAULT_TOLERANCES))})
        try:
            number = float(value)
        except ValueError:
            raise ConfigurationError(f"Tolerance '{key}' is not a number", {"where": where, "value": value})
        if not number > 0.0:
            raise ConfigurationError(f"Tolerance '{key}' must be positive", {"where": where, "value": number})
        tolerances[key] = number
    return tolerances

class ConfigManager:
    """
    Reads scenario files and the settings file of one configuration directory.

    Scenarios and settings are cached after the first load; pass
    ``refresh=True`` to re-read them.
    """

    def __init__(self, config_dir: Optional[str] = None):
        """
        Args:
            config_dir: Directory holding ``settings.json`` and ``scenarios/``;
                the bundled ``config/`` package directory when omitted
        """
        self.config_dir = config_dir or os.path.dirname(os.path.abspath(__file__))
        self.scenarios_dir = os.path.join(self.config_dir, "scenarios")
        self.settings_path = os.path.join(self.config_dir, "settings.json")

        self._scenarios_cache: Dict[str, Scenario] = {}
        self._settings_cache: Optional[Dict[str, Any]] = None

        logger.debug(f"ConfigManager reading {self.config_dir}")

    def load_scenario(self, path: str) -> Scenario:
        """
        Load one scenario file.

        Args:
            path: Path to an INI file with [scenario], [inputs] and [tolerances]

        Returns:
            The parsed Scenario

        Raises:
            ConfigurationError: With a line, section or key diagnostic
        """
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            with open(path, "r", encoding="utf-8") as f:
                parser.read_file(f, source=path)
        except FileNotFoundError:
            raise ConfigurationError("Scenario file not found", {"path": path})
        except configparser.ParsingError as e:
            line = e.errors[0][0] if e.errors else None
            raise ConfigurationError("Malformed scenario file", {"path": path, "line": line})
        except configparser.Error as e:
            raise ConfigurationError(f"Malformed scenario file: {e.message}",
                                     {"path": path, "line": getattr(e, "lineno", None)})

        if not parser.has_section("scenario"):
            raise ConfigurationError("Missing [scenario] section", {"path": path})
        header = parser["scenario"]
        command = header.get("command")
        action = header.get("action")
        if command not in COMMANDS:
            raise ConfigurationError(f"Unknown command '{command}'",
                                     {"path": path, "section": "scenario", "key": "command"})
        if action not in COMMANDS[command]:
            raise ConfigurationError(f"Unknown action '{action}' for {command}",
                                     {"path": path, "section": "scenario", "key": "action"})
        name = header.get("name", os.path.splitext(os.path.basename(path))[0])

        unknown = [s for s in parser.sections() if s not in ("scenario", "inputs", "tolerances")]
        if unknown:
            raise ConfigurationError(f"Unknown section [{unknown[0]}]", {"path": path})

        inputs = {}
        if parser.has_section("inputs"):
            inputs = {key: parse_value(value) for key, value in parser["inputs"].items()}
        tolerances = {}
        if parser.has_section("tolerances"):
            tolerances = parse_tolerances(dict(parser["tolerances"]), f"{path} [tolerances]")

        logger.debug(f"Loaded scenario {name} ({command} {action}) from {path}")
        return Scenario(name, command, action, inputs, tolerances, source=path)

    def load_scenarios(self, refresh: bool = False) -> Dict[str, Scenario]:
        """
        Load all bundled scenarios.

        Args:
            refresh: Whether to refresh the cache

        Returns:
            Dictionary mapping scenario names to scenarios, in file name order
        """
        if not refresh and self._scenarios_cache:
            return self._scenarios_cache

        scenarios = {}
        if os.path.isdir(self.scenarios_dir):
            for filename in sorted(os.listdir(self.scenarios_dir)):
                if filename.endswith(".ini"):
                    scenario = self.load_scenario(os.path.join(self.scenarios_dir, filename))
                    if scenario.name in scenarios:
                        raise ConfigurationError(f"Duplicate scenario name '{scenario.name}'",
                                                 {"path": scenario.source})
                    scenarios[scenario.name] = scenario
        logger.info(f"Loaded {len(scenarios)} scenarios")

        self._scenarios_cache = scenarios
        return scenarios

    def get_scenario(self, name: str) -> Optional[Scenario]:
        """
        Get a bundled scenario by name.

        Args:
            name: Scenario name

        Returns:
            The scenario, or None if not found
        """
        return self.load_scenarios().get(name)

    def load_settings(self, refresh: bool = False) -> Dict[str, Any]:
        """
        Resolve the application settings.

        Values from ``settings.json`` update the defaults section by section,
        then ``CAPLAB_*`` environment variables override single keys.

        Raises:
            ConfigurationError: If the file is not valid JSON or names an unknown tolerance
        """
        if self._settings_cache is not None and not refresh:
            return self._settings_cache

        settings = self._get_default_settings()
        if os.path.isfile(self.settings_path):
            try:
                with open(self.settings_path, encoding="utf-8") as f:
                    from_file = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigurationError(f"Unreadable settings file: {e}", {"path": self.settings_path})
            for section, values in from_file.items():
                if isinstance(values, dict) and isinstance(settings.get(section), dict):
                    settings[section].update(values)
                else:
                    settings[section] = values
            logger.debug(f"Merged settings from {self.settings_path}")

        unknown = sorted(set(settings["tolerances"]) - set(DEFAULT_TOLERANCES))
        if unknown:
            raise ConfigurationError("Unknown tolerances in settings",
                                     {"path": self.settings_path, "keys": ",".join(unknown)})

        for variable, (section, key) in ENV_OVERRIDES.items():
            if os.getenv(variable):
                settings[section][key] = os.environ[variable]
                logger.debug(f"{variable} overrides {section}.{key}")

        self._settings_cache = settings
        return settings

    def _get_default_settings(self) -> Dict[str, Any]:
        return {
            "tolerances": dict(DEFAULT_TOLERANCES),
            "output": {"output_dir": "results", "csv": True},
            "logging": {"log_dir": "logs", "log_level": "INFO"},
        }

    def get_tolerances(self, overrides: Optional[Dict[str, float]] = None) -> Dict[str, float]:
        """
        Named tolerances from the settings with optional overrides applied.

        Args:
            overrides: Scenario or command-line tolerance values

        Returns:
            Complete tolerance mapping
        """
        tolerances = dict(self.load_settings()["tolerances"])
        tolerances.update(overrides or {})
        return tolerances

    def save_settings(self, settings: Dict[str, Any]) -> bool:
        """Write ``settings`` to ``settings.json``; False if the file cannot be written."""
        try:
            with open(self.settings_path, "w", encoding="utf-8") as f:
                json.dump(settings, f, indent=2)
        except OSError as e:
            logger.error(f"Could not write {self.settings_path}: {e}")
            return False
        self._settings_cache = settings
        logger.info(f"Saved settings to {self.settings_path}")
        return True

_config_manager: Optional[ConfigManager] = None

def get_config_manager() -> ConfigManager:
    """Shared ConfigManager over the bundled configuration directory."""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
    return _config_manager
