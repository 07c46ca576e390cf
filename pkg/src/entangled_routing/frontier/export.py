"""
export.py

Tabular and JSON output of frontier, throughput and simulation results.

Floats are rounded to 12 significant digits before writing so that reading a
CSV back reproduces the in-memory table exactly.

Functions
---------
frontier_table         : FrontierPoint list as a DataFrame in the fixed column order.
round_significant      : Round float columns to 12 significant digits.
check_required_columns : Check that all required columns are present in a DataFrame.
write_table            : Write a DataFrame as CSV or JSON records.
read_table_csv         : Read a CSV written by write_table.
write_json             : Write a mapping as JSON with NaN mapped to null.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import json
import math
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from .frontier import FrontierPoint

SIGNIFICANT_DIGITS = 12
FLOAT_FORMAT = "%.12g"

FRONTIER_COLUMNS = [
    "p",
    "a_star",
    "a_star_se",
    "a_cl_upper",
    "a_cl_sr_upper",
    "a_qu_lower",
    "dwq_cl",
    "dwq_qu",
    "advantage",
    "throughput_norm",
    "error",
]

# ---------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------

def round_significant(df: pd.DataFrame) -> pd.DataFrame:
    """Round every float column to 12 significant digits."""
    out = df.copy()
    for column in out.columns:
        if pd.api.types.is_float_dtype(out[column]):
            out[column] = [float(f"{v:.{SIGNIFICANT_DIGITS}g}") for v in out[column]]
    return out


def frontier_table(points: Sequence[FrontierPoint]) -> pd.DataFrame:
    """
    Frontier points as a DataFrame.

    Parameters
    ----------
    points : sequence of FrontierPoint
        Frontier rows in p order.

    Returns
    -------
    pd.DataFrame
        Columns p, a_star, a_star_se, a_cl_upper, a_cl_sr_upper, a_qu_lower,
        dwq_cl, dwq_qu, advantage, throughput_norm, error.
    """
    rows = [
        [
            pt.p,
            pt.a_star,
            pt.a_star_se,
            pt.a_cl_det_upper,
            pt.a_cl_sr_upper,
            pt.a_quantum_lower,
            pt.dwq_classical,
            pt.dwq_quantum,
            pt.advantage_certified,
            pt.throughput_normalized,
            pt.error,
        ]
        for pt in points
    ]
    df = pd.DataFrame(rows, columns=FRONTIER_COLUMNS)
    df["advantage"] = df["advantage"].astype(bool)
    df["error"] = df["error"].astype(object)
    return round_significant(df)


def check_required_columns(df: pd.DataFrame, required_columns: list[str]) -> None:
    """
    Check that all required columns are present in a DataFrame.

    Raises
    ------
    ValueError
        Raised if any required column is missing.
    """
    missing = [column for column in required_columns if column not in df.columns]
    if missing:
        raise ValueError(f"Missing required columns: {', '.join(missing)}")

# ---------------------------------------------------------------------
# Writers and Readers
# ---------------------------------------------------------------------

def _json_safe(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def write_json(data: Mapping[str, Any], output_file: Path) -> Path:
    """Write a mapping as indented JSON; NaN becomes null and infinities become strings."""
    output_file.write_text(json.dumps(_json_safe(data), indent=2) + "\n")
    return output_file


def write_table(df: pd.DataFrame, output_stem: Path, fmt: str) -> Path:
    """
    Write a table as CSV or as a JSON list of records.

    Parameters
    ----------
    df : pd.DataFrame
        Table to write; float columns are rounded to 12 significant digits.
    output_stem : Path
        Output path without suffix.
    fmt : str
        "csv" or "json".

    Raises
    ------
    ValueError
        Raised for an unknown format.

    Returns
    -------
    Path
        Path of the written file.
    """
    table = round_significant(df)
    if fmt == "csv":
        path = output_stem.with_suffix(".csv")
        table.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan")
    elif fmt == "json":
        path = output_stem.with_suffix(".json")
        write_json({"records": table.to_dict(orient="records")}, path)
    else:
        raise ValueError(f"Unknown output format '{fmt}'. Allowed formats: csv, json")
    return path


def read_table_csv(path: Path, required_columns: list[str] | None = None) -> pd.DataFrame:
    """
    Read a CSV written by write_table.

    An `error` column, when present, reads back as strings with "" for no error.

    Raises
    ------
    ValueError
        Raised if a required column is missing.
    """
    df = pd.read_csv(path, float_precision="round_trip")
    if required_columns:
        check_required_columns(df=df, required_columns=required_columns)
    if "error" in df.columns:
        df["error"] = df["error"].fillna("").astype(str).astype(object)
    return df
