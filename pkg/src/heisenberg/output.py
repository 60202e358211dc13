"""CSV and JSON emitters with a leading ``# key=value`` metadata block."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

from . import __version__


def _cell(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple) and len(value) == 3:
        return "{},{},{}".format(*value)
    return "" if value is None else str(value)


def metadata_block(meta: dict) -> str:
    meta = {"library_version": __version__, **meta}
    return "".join(f"# {k}={v}\n" for k, v in meta.items())


def render(columns: Sequence[str], rows: Iterable[Sequence], meta: dict, fmt: str = "csv") -> str:
    rows = [[_cell(v) for v in row] for row in rows]
    if fmt == "json":
        meta = {"library_version": __version__, **meta}
        return json.dumps(
            {"metadata": {k: _cell(v) for k, v in meta.items()},
             "rows": [dict(zip(columns, row)) for row in rows]},
            indent=2,
        ) + "\n"
    buf = io.StringIO()
    buf.write(metadata_block(meta))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def read_metadata(text: str) -> dict:
    meta = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition("=")
        meta[key] = value
    return meta
