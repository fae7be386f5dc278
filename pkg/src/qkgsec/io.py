"""JSON and CSV output with lossless float formatting."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

import numpy as np

FLOAT_DIGITS = 17


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, f".{FLOAT_DIGITS}g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _plain(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Serialize to JSON, writing floats with 17 significant digits.

    Non-finite floats become ``null``.  Key order is preserved.
    """
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(_plain(v), (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


CURVE_HEADER = ("eta", "trace_distance", "eq3_prediction", "ratio")


def rows_to_csv(rows: Iterable[dict], header: Sequence[str] = CURVE_HEADER) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        cells = []
        for key in header:
            v = row[key]
            cells.append("nan" if v is None else format_float(float(v)))
        writer.writerow(cells)
    return buf.getvalue()
