"""Deterministic CSV/JSON emission: stable column order, floats at 6 significant digits."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path


def fmt_float(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6g}"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "pass" if v else "fail"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(_jsonable(v), separators=(",", ":"))
    return "" if v is None else str(v)


def _jsonable(v):
    if isinstance(v, float):
        return v if math.isinf(v) else float(fmt_float(v))
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


def render(rows: list[dict], columns: list[str], fmt: str = "csv", single: bool = False) -> str:
    """CSV with a header row, or JSON (a list of objects, or one object when ``single``)."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        records = [{c: _jsonable(row.get(c)) for c in columns} for row in rows]
        if single:
            if len(records) != 1:
                raise ValueError("single-object JSON needs exactly one record")
            records = records[0]
        return json.dumps(records, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(rows: list[dict], columns: list[str], fmt: str = "csv", out: str | Path | None = None,
         single: bool = False) -> str:
    """Render rows and write them to ``out`` (if given); returns the text."""
    text = render(rows, columns, fmt, single)
    if out is not None:
        Path(out).write_text(text)
    return text
