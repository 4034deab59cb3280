"""CSV/JSON result tables with a metadata header, plus their readers."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .errors import ConfigError

__all__ = ["Table", "format_number", "render", "write_table", "read_table", "parse_table"]


def format_number(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "{:.17g}".format(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_number(value)
    return value


@dataclass
class Table:
    columns: list[str]
    rows: list[dict[str, Any]]
    meta: dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> list[Any]:
        return [row[name] for row in self.rows]


def _render_csv(table: Table) -> str:
    buf = io.StringIO()
    for key in sorted(table.meta):
        buf.write(f"# {key}={json.dumps(table.meta[key], sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_number(row[c]) for c in table.columns])
    return buf.getvalue()


def _render_json(table: Table) -> str:
    rows = [{c: _jsonable(row[c]) for c in table.columns} for row in table.rows]
    doc = {"meta": dict(table.meta, columns=table.columns), "rows": rows}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        return _render_csv(table)
    if fmt == "json":
        return _render_json(table)
    raise ConfigError(f"unknown output format {fmt!r}")


def write_table(table: Table, path: str | Path, fmt: str) -> None:
    Path(path).write_text(render(table, fmt), encoding="utf-8")


def _parse_cell(text: str) -> Any:
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if text in ("true", "false"):
        return text == "true"
    return text


def parse_table(text: str) -> Table:
    """Inverse of :func:`render` for either format."""
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        meta = dict(doc["meta"])
        columns = meta.pop("columns")
        rows = [{c: (_parse_cell(v) if isinstance(v, str) else v) for c, v in row.items()}
                for row in doc["rows"]]
        return Table(columns, rows, meta)
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = json.loads(value)
        elif line.strip():
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [{c: _parse_cell(v) for c, v in zip(columns, rec)} for rec in reader]
    return Table(columns, rows, meta)


def read_table(path: str | Path) -> Table:
    return parse_table(Path(path).read_text(encoding="utf-8"))
