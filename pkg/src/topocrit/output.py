"""Deterministic CSV/JSON writers.

Floats are rendered with 17 significant digits so identical configurations
reproduce byte-identical files; every file opens with a comment line echoing
the tool version and the full configuration.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

FLOAT_FMT = "%.17g"


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return FLOAT_FMT % v
    return str(v)


def header_comment(version: str, config: dict) -> str:
    echo = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return "# topocrit %s config=%s" % (version, echo)


def write_csv(path, version: str, config: dict, colnames, rows) -> None:
    """Write rows (iterable of tuples) as comma-separated UTF-8 with LF."""
    lines = [header_comment(version, config), ",".join(colnames)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _jsonify(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        return float(FLOAT_FMT % obj)
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def write_json(path, version: str, config: dict, payload: dict) -> None:
    """Write one JSON object; key order is insertion order (stable)."""
    doc = {"tool": "topocrit", "version": version,
           "config": dict(sorted(config.items()))}
    doc.update(_jsonify(payload))
    Path(path).write_text(json.dumps(doc, indent=2) + "\n",
                          encoding="utf-8", newline="\n")
