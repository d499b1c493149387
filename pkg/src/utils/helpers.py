# src/utils/helpers.py
import json
import os
from typing import Any

import pandas as pd


def ensure_directory(directory: str) -> str:
    if directory:
        os.makedirs(directory, exist_ok=True)
    return directory


def _json_default(value: Any):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if hasattr(value, "item"):
        return value.item()
    return str(value)


def dump_json(payload: Any, path: str) -> str:
    """Deterministic JSON file (sorted keys, trailing newline)"""
    ensure_directory(os.path.dirname(path))
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True, default=_json_default)
        handle.write("\n")
    return path


def format_table(df: pd.DataFrame) -> str:
    """Fixed-format text table for terminal output"""
    if df.empty:
        return "(no rows)"
    return df.to_string(index=False, float_format=lambda v: f"{v: .10g}")
