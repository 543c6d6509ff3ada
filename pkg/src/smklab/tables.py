"""Tables with a metadata header, written as CSV or JSON.

CSV layout: ``# key=value`` lines, a header row, then data rows.  Meta
keys may contain ``=``; values may not.  Floats use ``%.16e`` (17
significant digits), integers and strings are written as is, and lines end
with ``\\n``.  Output for a given table is byte-identical
across runs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.meta.items():
            buf.write(f"# {key}={value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {"meta": self.meta, "columns": self.columns, "rows": self.rows}
        return json.dumps(payload, indent=1, allow_nan=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Table":
        payload = json.loads(text)
        return cls(payload["columns"], payload["rows"], payload["meta"])

    @classmethod
    def from_csv(cls, text: str) -> "Table":
        """Parse CSV written by ``to_csv``; numeric cells come back as float or int."""
        meta, body = {}, []
        for line in text.splitlines():
            if line.startswith("# ") and not body:
                key, _, value = line[2:].rpartition("=")
                meta[key] = value
            else:
                body.append(line)
        reader = csv.reader(body)
        columns = next(reader)
        rows = [[_parse(c) for c in r] for r in reader]
        return cls(columns, rows, meta)

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.16e" % value
    return value


def _parse(cell):
    for conv in (int, float):
        try:
            return conv(cell)
        except ValueError:
            pass
    return {"true": True, "false": False}.get(cell, cell)
