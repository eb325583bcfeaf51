"""Byte-deterministic JSON and CSV emission.

json.dumps almost suffices, but float repr is shortest-roundtrip rather
than fixed-width; artifacts here pin every float to 17 significant digits
and LF newlines so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

FLOAT_FORMAT = ".17g"


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} cannot be serialised")
    if x == 0.0:
        x = 0.0  # normalise -0.0
    return format(x, FLOAT_FORMAT)


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _emit(value: Any, indent: int, pieces: list[str]) -> None:
    pad = "  " * indent
    if value is None:
        pieces.append("null")
    elif isinstance(value, bool):
        pieces.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        pieces.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        pieces.append(fmt_float(value))
    elif isinstance(value, str):
        pieces.append(_escape(value))
    elif isinstance(value, np.ndarray):
        _emit(value.tolist(), indent, pieces)
    elif isinstance(value, (list, tuple)):
        if not value:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, item in enumerate(value):
            pieces.append(pad + "  ")
            _emit(item, indent + 1, pieces)
            pieces.append(",\n" if i + 1 < len(value) else "\n")
        pieces.append(pad + "]")
    elif isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{\n")
        items = list(value.items())
        for i, (k, v) in enumerate(items):
            if not isinstance(k, str):
                raise TypeError(f"JSON keys must be strings, got {type(k).__name__}")
            pieces.append(pad + "  " + _escape(k) + ": ")
            _emit(v, indent + 1, pieces)
            pieces.append(",\n" if i + 1 < len(items) else "\n")
        pieces.append(pad + "}")
    elif isinstance(value, complex):
        _emit({"re": value.real, "im": value.imag}, indent, pieces)
    else:
        raise TypeError(f"cannot serialise {type(value).__name__} to JSON")


def to_json(value: Any) -> str:
    """Render with insertion-ordered keys, 2-space indent, LF, no trailing
    whitespace; floats at 17 significant digits."""
    pieces: list[str] = []
    _emit(value, 0, pieces)
    pieces.append("\n")
    return "".join(pieces)


def write_json(path, value: Any) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(to_json(value))


def _cell(v: Any) -> str:
    if isinstance(v, str):
        if "," in v or "\n" in v or '"' in v:
            raise ValueError(f"CSV cell {v!r} needs quoting; use plain tokens")
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    raise TypeError(f"cannot serialise {type(v).__name__} to CSV")


def to_csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    width = len(header)
    for row in rows:
        row = list(row)
        if len(row) != width:
            raise ValueError(f"row width {len(row)} != header width {width}")
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(to_csv(header, rows))


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Inverse of write_csv for our own plain-token files."""
    with open(path, "r", newline="") as fh:
        text = fh.read()
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise ValueError(f"{path}: empty CSV")
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise ValueError(f"{path}: row {i + 2} has {len(row)} cells, header has {len(header)}")
    return header, rows
