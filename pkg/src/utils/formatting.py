"""
Report formatting for CSV and JSON output.

CSV reals are written with 17 significant digits; JSON uses the shortest
repr that round-trips. Identical inputs give byte-identical files.
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

from ..core.helpers import format_real

REPORT_VERSION = "1.0.0"


def to_plain(obj: Any) -> Any:
    """
    Convert reports, numpy scalars and enums to JSON-ready Python values.

    Non-finite reals become None since JSON has no literal for them.
    """
    if isinstance(obj, BaseModel):
        return to_plain(obj.model_dump())
    if isinstance(obj, pd.DataFrame):
        return [to_plain(row) for row in obj.to_dict(orient="records")]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def flatten(record: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Nested dicts to dotted keys, for one CSV row per report."""
    flat: Dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = ";".join(format_real(v) if isinstance(v, float) else str(v) for v in value)
        else:
            flat[name] = value
    return flat


def reports_to_json(reports: Iterable[Any], config: Optional[Dict[str, Any]] = None) -> str:
    """Top-level {"version", "config", "reports"} document."""
    document = {
        "version": REPORT_VERSION,
        "config": to_plain(config or {}),
        "reports": [to_plain(r) for r in reports],
    }
    return json.dumps(document, indent=2, sort_keys=False, allow_nan=False) + "\n"


def reports_to_frame(reports: Iterable[Any]) -> pd.DataFrame:
    """One flattened row per report; columns in first-seen order."""
    rows: List[Dict[str, Any]] = []
    for r in reports:
        plain = to_plain(r)
        if isinstance(plain, list):
            rows.extend(flatten(row) for row in plain)
        else:
            rows.append(flatten(plain))
    return pd.DataFrame(rows)


def reports_to_csv(reports: Iterable[Any]) -> str:
    """Header row, comma separated, \\n line endings."""
    frame = reports_to_frame(reports)
    for column in frame.columns:
        if pd.api.types.is_float_dtype(frame[column]):
            frame[column] = frame[column].map(lambda v: "" if pd.isna(v) else format_real(v))
        elif pd.api.types.is_bool_dtype(frame[column]):
            frame[column] = frame[column].map(format_real)
    return frame.to_csv(index=False, lineterminator="\n")


def write_output(text: str, path: Optional[Path]) -> None:
    """Write to path (UTF-8) or standard output."""
    if path is None:
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8")
