"""JSON and CSV writers for command results.

Floats are written with 17 significant digits, exact rationals as strings
(``"3/2"``), polynomials in canonical text form. JSON documents carry
``"schema": 1`` as their first key.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Final, Mapping, Sequence, TextIO

import numpy as np

from trace_map_toolkit.core.commands import CommandResult
from trace_map_toolkit.core.gaplabel import QuadExact
from trace_map_toolkit.core.ising import ScaledScalar
from trace_map_toolkit.core.polyring import IntPoly3

__all__: Final = [
    "SCHEMA_VERSION",
    "format_float",
    "to_jsonable",
    "dumps_json",
    "dumps_csv",
    "render",
    "write_result",
    "atomic_write_text",
]

SCHEMA_VERSION: Final = 1
_INDENT: Final = "  "


def format_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, ".17g")


def to_jsonable(value: Any) -> Any:
    """Turn domain objects into plain dicts, lists, ints, floats and strings."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, QuadExact):
        return value.to_json()
    if isinstance(value, (IntPoly3, ScaledScalar)):
        return str(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def _encode(value: Any, depth: int) -> str:
    pad, inner = _INDENT * depth, _INDENT * (depth + 1)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_encode(v, depth + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in value):
            return "[" + ", ".join(_encode(v, depth + 1) for v in value) + "]"
        items = [f"{inner}{_encode(v, depth + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return json.dumps(value, ensure_ascii=False)


def dumps_json(payload: Mapping[str, Any]) -> str:
    document = {"schema": SCHEMA_VERSION, **to_jsonable(payload)}
    return _encode(document, 0) + "\n"


def _csv_cell(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, (Fraction, IntPoly3, ScaledScalar)):
        return str(value)
    if isinstance(value, QuadExact):
        return format_float(float(value))
    return value


def dumps_csv(headers: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(headers), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({h: _csv_cell(row.get(h, "")) for h in headers})
    return buffer.getvalue()


def render(result: CommandResult) -> str:
    if result.format == "csv":
        return dumps_csv(result.headers, result.rows)
    return dumps_json(result.payload)


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(
        "w", dir=path.parent, delete=False, encoding="utf-8", newline=""
    ) as tmp:
        tmp.write(text)
        tmp_path = Path(tmp.name)
    tmp_path.replace(path)


def write_result(
    result: CommandResult, output: str | Path | None, stream: TextIO | None = None
) -> None:
    text = render(result)
    if output is None or str(output) == "-":
        (stream or sys.stdout).write(text)
        return
    atomic_write_text(Path(output).expanduser(), text)
