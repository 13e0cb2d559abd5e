"""
Logging Utilities Module

This module configures the application log and keeps per-scenario logs:
one file per scenario run plus the numeric step records (Newton iterates,
individual identity checks) the scenario engine reports.
"""

import os
import sys
import shutil
import logging
import datetime
from typing import Optional, Dict, Any, List

APP_FORMAT = "%(asctime)s [%(levelname)s] %(name)s (%(filename)s:%(lineno)d) - %(message)s"
SCENARIO_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"
SCENARIO_LOGGER_PREFIX = "capillary_lab.scenario"

def _file_handler(path: str, fmt: str) -> logging.FileHandler:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    handler = logging.FileHandler(path)
    handler.setFormatter(logging.Formatter(fmt))
    return handler

def setup_logging(
    log_dir: str = "logs",
    log_level: int = logging.INFO,
    log_to_console: bool = True,
    log_to_file: bool = True,
    app_name: str = "capillary_lab"
) -> logging.Logger:
    """
    Configure the root logger for a command-line run.

    Library modules log under their own ``__name__`` and never add handlers;
    records reach stderr and a timestamped file in ``log_dir`` through here.

    Args:
        log_dir: Directory of the run log
        log_level: Root level
        log_to_console: Attach a stderr handler
        log_to_file: Attach a file handler
        app_name: Stem of the log file name

    Returns:
        The root logger
    """
    root = logging.getLogger()
    root.setLevel(log_level)
    root.handlers = []

    if log_to_console:
        # stdout carries the result summary
        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(logging.Formatter(APP_FORMAT))
        root.addHandler(console)

    if log_to_file:
        stamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
        root.addHandler(_file_handler(os.path.join(log_dir, f"{app_name}_{stamp}.log"), APP_FORMAT))

    root.info(f"Logging initialized for {app_name} at level {logging.getLevelName(log_level)}")
    return root

def parse_log_level(level: Any, default: int = logging.INFO) -> int:
    """
    Convert a level name such as "debug" or a number into a logging level.

    Args:
        level: Level name, number or None
        default: Level returned for empty or unknown input

    Returns:
        Logging level integer
    """
    if level is None or level == "":
        return default
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(str(level).strip().upper())
    return resolved if isinstance(resolved, int) else default

def get_scenario_logger(scenario_name: str, log_dir: Optional[str] = None) -> logging.Logger:
    """
    Return the logger of one scenario, writing ``scenario_<name>.log`` in
    ``log_dir`` when a directory is given. Repeated calls reuse the handler.
    """
    scenario_log = logging.getLogger(f"{SCENARIO_LOGGER_PREFIX}.{scenario_name}")
    if log_dir is not None and not scenario_log.handlers:
        scenario_log.setLevel(logging.DEBUG)
        scenario_log.addHandler(
            _file_handler(os.path.join(log_dir, f"scenario_{scenario_name}.log"), SCENARIO_FORMAT))
        scenario_log.debug(f"Scenario log opened in {log_dir}")
    return scenario_log

class ScenarioLogger:
    """
    Log of one scenario run: events and configuration go to the scenario
    log file, numeric steps are also kept in memory for the result.
    """

    def __init__(self, scenario_name: str, log_dir: Optional[str] = None):
        self.scenario_name = scenario_name
        self.log_dir = log_dir
        self.logger = get_scenario_logger(scenario_name, log_dir)
        self.step_logs: List[Dict[str, Any]] = []

    @property
    def log_path(self) -> Optional[str]:
        """Path of the scenario log file, None when the run logs nowhere."""
        handler = next((h for h in self.logger.handlers if isinstance(h, logging.FileHandler)), None)
        return handler.baseFilename if handler is not None else None

    def log_config(self, config: Dict[str, Any]) -> None:
        """Record the scenario being run, in full at DEBUG level."""
        self.logger.info(f"Running {config.get('command')} {config.get('action')} "
                         f"with {len(config.get('inputs', {}))} inputs")
        self.logger.debug(f"Scenario: {config}")

    def log_step(self, step: int, stage: str, values: Dict[str, Any]) -> None:
        """
        Record one step of a scenario (a Newton iteration, a single check).

        Args:
            step: Step number within the stage
            stage: Stage label (e.g., "newton", "kato", "poincare")
            values: Numbers recorded for the step
        """
        self.step_logs.append({"step": step, "stage": stage, "values": dict(values)})
        self.logger.debug(f"[{stage} #{step}] {values}")

    def log_event(self, event_type: str, details: Dict[str, Any]) -> None:
        """Record a lifecycle event ("start", "skipped", "end")."""
        self.logger.info(f"{event_type}: {details}")

    def get_steps(self, stage: Optional[str] = None) -> List[Dict[str, Any]]:
        """Recorded steps, all of them or those of one stage."""
        return [entry for entry in self.step_logs if stage is None or entry["stage"] == stage]

    def export_logs(self, filepath: str) -> str:
        """
        Copy the scenario log file to ``filepath``.

        Returns:
            ``filepath``, or "" when the scenario has no log file or the copy fails
        """
        source = self.log_path
        if source is None:
            self.logger.warning(f"Scenario {self.scenario_name} has no log file to export")
            return ""
        try:
            shutil.copy2(source, filepath)
        except OSError as e:
            self.logger.error(f"Could not export {source}: {e}")
            return ""
        self.logger.info(f"Exported scenario log to {filepath}")
        return filepath
