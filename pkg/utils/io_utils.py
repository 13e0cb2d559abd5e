"""
I/O Utilities Module

This module provides deterministic JSON emission and CSV table writing for
scenario artifacts.
"""

import os
import json
import math
import logging
from typing import Any, Dict, Mapping

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

def format_float(value: float) -> str:
    """Render a float with 17 significant digits; non-finite values as quoted strings."""
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, ".17g")

def to_json_text(data: Any, indent: int = 2, _level: int = 0) -> str:
    """
    Serialize data to JSON keeping insertion order and 17-digit floats.

    Args:
        data: Nested dicts, lists, tuples, numpy scalars/arrays, strings, numbers
        indent: Spaces per nesting level

    Returns:
        JSON text
    """
    pad = " " * (indent * (_level + 1))
    closing = " " * (indent * _level)

    if isinstance(data, np.ndarray):
        data = data.tolist()
    if isinstance(data, np.generic):
        data = data.item()

    if data is None or isinstance(data, (bool, str)):
        return json.dumps(data)
    if isinstance(data, int):
        return str(data)
    if isinstance(data, float):
        return format_float(data)
    if isinstance(data, Mapping):
        if not data:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key))}: {to_json_text(value, indent, _level + 1)}"
            for key, value in data.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + closing + "}"
    if isinstance(data, (list, tuple)):
        if not data:
            return "[]"
        items = [f"{pad}{to_json_text(value, indent, _level + 1)}" for value in data]
        return "[\n" + ",\n".join(items) + "\n" + closing + "]"
    return json.dumps(str(data))

def write_json(path: str, data: Dict[str, Any]) -> str:
    """
    Write a result dictionary as deterministic JSON.

    Args:
        path: Destination file
        data: Result dictionary

    Returns:
        The path written
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(to_json_text(data))
        f.write("\n")
    logger.info(f"Wrote JSON artifact: {path}")
    return path

def write_csv(path: str, frame: pd.DataFrame) -> str:
    """
    Write a table as CSV with 17 significant digits.

    Args:
        path: Destination file
        frame: Table to write

    Returns:
        The path written
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote CSV artifact: {path} ({len(frame)} rows)")
    return path
