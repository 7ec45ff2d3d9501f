"""Sweep CSV loading: '#' metadata lines, a header row, string/float columns."""

from __future__ import annotations

import csv
import io


class InputError(Exception):
    """Unusable CSV input (missing file content, no data rows)."""


class RecipeError(Exception):
    """Recipe refers to columns the CSV does not provide."""


class SweepTable:
    """Column-oriented view of one sweep CSV."""

    def __init__(self, meta: dict, columns: dict):
        self.meta = meta
        self.columns = columns

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def column(self, name: str) -> list:
        if name not in self.columns:
            raise RecipeError(
                f"column {name!r} not in CSV (have: {', '.join(sorted(self.columns))})")
        return self.columns[name]

    def floats(self, name: str) -> list:
        out = []
        for cell in self.column(name):
            try:
                out.append(float(cell))
            except ValueError:
                out.append(float("nan"))
        return out


def load_sweep(path) -> SweepTable:
    meta = {}
    data_lines = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    meta.setdefault(key.strip(), val.strip())
                continue
            if line.strip():
                data_lines.append(line)
    if not data_lines:
        raise InputError(f"{path}: no data rows")
    reader = csv.reader(io.StringIO("".join(data_lines)))
    header = next(reader)
    columns = {name: [] for name in header}
    for row in reader:
        if len(row) != len(header):
            raise InputError(f"{path}: ragged row with {len(row)} cells")
        for name, cell in zip(header, row):
            columns[name].append(cell)
    if not columns or not next(iter(columns.values())):
        raise InputError(f"{path}: header but no rows")
    return SweepTable(meta, columns)
