"""Report documents and their JSON / CSV encodings.

Floats are written in Python's shortest round-trip form, so reading a report
back recovers every double exactly. Non-finite values are written as the
strings ``"inf"``, ``"-inf"`` and ``"nan"`` in both encodings.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from ._io import write_atomic

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "make_report", "to_json", "to_csv", "flatten",
           "encode", "emit", "sanitize"]


def sanitize(obj):
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def make_report(command: str, config: dict, result: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "depthsep",
        "tool_version": __version__,
        "command": command,
        "config": sanitize(config),
        "result": sanitize(result),
    }


def to_json(report: dict) -> str:
    return json.dumps(sanitize(report), indent=2) + "\n"


def flatten(obj, prefix=""):
    """Yield ``(dotted_key, scalar)`` pairs; list items are keyed by index."""
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from flatten(v, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, obj


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in flatten(sanitize(report)):
        writer.writerow([key, _csv_value(value)])
    return buf.getvalue()


def encode(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")


def emit(report: dict, fmt: str, out=None, stream=None):
    """Write the encoded report to ``out`` atomically, or to ``stream``."""
    text = encode(report, fmt)
    if out:
        write_atomic(out, text)
    else:
        (stream or sys.stdout).write(text)
    return text
