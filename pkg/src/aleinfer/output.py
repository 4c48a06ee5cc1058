"""Deterministic serialisation of analysis results.

JSON keeps insertion key order and renders every float with 17 significant
digits, so parsing and re-emitting a file reproduces it byte for byte.
CSV files use '.' decimals and '\\n' line endings.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Mapping
from pathlib import Path

import numpy as np

STATS_HEADER = ["variable", "statistic", "estimate", "p.value", "conf.low", "median", "mean", "conf.high"]
REGIONS_HEADER = [
    "variable", "kind", "start_x", "end_x", "x_span", "n", "n_pct",
    "start_y", "end_y", "trend", "x", "y", "relative_to_mid",
]


def format_float(v: float) -> str:
    v = float(v) + 0.0  # folds -0.0 into 0.0
    if not math.isfinite(v):
        raise ValueError(f"cannot serialise non-finite value {v}")
    return format(v, ".17g")


def _render(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_render(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end_pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (Mapping, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_render(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _render(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end_pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with fixed key order and 17-significant-digit floats."""
    return _render(obj, indent, 0) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "TRUE" if v else "FALSE"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
