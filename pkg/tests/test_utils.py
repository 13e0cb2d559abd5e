"""Tests for reports, artifact writers, errors and scenario logging."""

import json
import logging

import numpy as np
import pandas as pd
import pytest

from utils.error_utils import (ArgumentError, CapillaryLabError, ConvergenceError, DataError,
                               EmptyEvaluationError, handle_error)
from utils.io_utils import format_float, to_json_text, write_csv, write_json
from utils.logging_utils import ScenarioLogger, parse_log_level
from utils.report_utils import VerificationReport, observed_order, refinement_study

def test_report_passes_within_tolerances():
    report = VerificationReport("demo", {"a": 1e-6, "b": 2.0, "info": 5.0}, {"a": 1e-5, "b": 1.0})
    assert not report.passed
    assert report.failures() == ["b"]
    data = report.to_dict()
    assert list(data) == ["name", "passed", "residuals", "tolerances", "grid", "details"]
    assert data["passed"] is False

    ok = VerificationReport("demo", {"a": 1e-6}, {"a": 1e-6})
    assert ok.passed and ok.failures() == []

def test_report_rejects_nan_residuals():
    report = VerificationReport("demo", {"a": float("nan")}, {"a": 1.0})
    assert not report.passed
    assert report.failures() == ["a"]

def test_observed_order_recovers_power_law():
    h = [0.1, 0.05, 0.025]
    assert observed_order(h, [3.0 * x ** 2 for x in h]) == pytest.approx(2.0)
    with pytest.raises(ArgumentError):
        observed_order([0.1], [0.01])
    with pytest.raises(ArgumentError):
        observed_order([0.1, 0.05], [0.01, 0.0])

def test_refinement_study_fits_each_key():
    def run(n):
        h = 1.0 / (n - 1)
        return {"h": h, "second": h ** 2, "first": 4.0 * h, "exact": 0.0}

    study = refinement_study(run, [11, 21, 41])
    assert len(study["rows"]) == 3
    assert study["orders"]["second"] == pytest.approx(2.0)
    assert study["orders"]["first"] == pytest.approx(1.0)
    assert "exact" not in study["orders"]

def test_float_formatting():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("nan")) == '"nan"'
    assert format_float(float("-inf")) == '"-inf"'

def test_json_text_keeps_order_and_round_trips():
    data = {"z": 1, "a": [np.float64(0.5), np.int64(2)], "arr": np.array([1.0, 2.0]),
            "flag": True, "none": None, "empty": {}}
    text = to_json_text(data)
    assert list(json.loads(text)) == ["z", "a", "arr", "flag", "none", "empty"]
    assert json.loads(text)["a"] == [0.5, 2]
    assert json.loads(to_json_text({"x": float("nan")})) == {"x": "nan"}

def test_artifact_writers(tmp_path):
    path = write_json(str(tmp_path / "nested" / "result.json"), {"value": 1.0 / 3.0})
    assert json.loads(open(path).read())["value"] == 1.0 / 3.0

    frame = pd.DataFrame({"t": [0.0, 0.5], "u": [1.0 / 3.0, 2.0]})
    path = write_csv(str(tmp_path / "table.csv"), frame)
    back = pd.read_csv(path)
    assert list(back.columns) == ["t", "u"]
    assert back["u"][0] == pytest.approx(1.0 / 3.0, rel=1e-15)

def test_error_messages_carry_details():
    error = DataError("Bad growth", {"s": 2.0})
    assert str(error) == "Bad growth (s=2.0)"
    assert str(CapillaryLabError("plain")) == "plain"
    assert isinstance(ArgumentError("x"), ValueError)
    assert isinstance(EmptyEvaluationError("x"), DataError)

    failure = ConvergenceError("Stalled", history=[1.0, 0.5], details={"iterations": 2})
    assert failure.history == [1.0, 0.5]
    assert failure.details == {"iterations": 2}

def test_errors_serialize_for_results():
    assert DataError("Bad growth", {"s": 2.0}).to_dict() == {
        "reason": "Bad growth", "details": {"s": 2.0}, "error": "DataError"}
    failure = ConvergenceError("Stalled", history=[1.0, 0.5]).to_dict()
    assert failure["history"] == [1.0, 0.5]
    assert failure["error"] == "ConvergenceError"

def test_handle_error_logs_with_context(caplog):
    with caplog.at_level(logging.ERROR, logger="utils.error_utils"):
        handle_error(DataError("Bad growth"), context="solve_slab")
    assert "solve_slab: DataError: Bad growth" in caplog.text

def test_handle_error_returns_default_and_calls_back():
    seen = []
    value = handle_error(ArgumentError("bad"), log_error=False, default_return=-1,
                         error_callback=seen.append)
    assert value == -1
    assert len(seen) == 1
    with pytest.raises(ArgumentError):
        handle_error(ArgumentError("bad"), log_error=False, raise_error=True)

@pytest.mark.parametrize("level, expected", [
    ("debug", logging.DEBUG),
    ("WARNING", logging.WARNING),
    (logging.ERROR, logging.ERROR),
    ("", logging.INFO),
    (None, logging.INFO),
    ("verbose", logging.INFO),
])
def test_parse_log_level(level, expected):
    assert parse_log_level(level) == expected

def test_scenario_logger_records_steps(tmp_path):
    scenario_logger = ScenarioLogger("utils_steps", str(tmp_path))
    scenario_logger.log_step(0, "newton", {"residual": 1.0})
    scenario_logger.log_step(1, "newton", {"residual": 1e-3})
    scenario_logger.log_step(0, "kato", {"residual": 1e-9})
    assert len(scenario_logger.get_steps()) == 3
    assert [s["step"] for s in scenario_logger.get_steps("newton")] == [0, 1]

    exported = scenario_logger.export_logs(str(tmp_path / "copy.log"))
    assert exported.endswith("copy.log")
    assert ScenarioLogger("utils_no_file").export_logs(str(tmp_path / "none.log")) == ""
