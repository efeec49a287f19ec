"""Deterministic CSV/JSON serialization of tables and curve blocks.

Floats use ``repr``: the shortest string that round-trips, never more than
17 significant digits.  Key and column order is fixed by the caller, so the
same inputs always give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


def fmt_float(x) -> str:
    return repr(float(x))


def plain(obj):
    """Convert numpy scalars/arrays (recursively) to JSON-ready Python values."""
    if isinstance(obj, dict):
        return {k: plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _cell(v) -> str:
    v = plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def _meta_lines(meta: dict) -> list[str]:
    return [f"# {k}: {json.dumps(plain(v), allow_nan=True)}" for k, v in meta.items()]


def dumps_json(obj) -> str:
    return json.dumps(plain(obj), indent=2, allow_nan=True) + "\n"


@dataclass
class Table:
    """Rows of records with a fixed column order."""

    columns: list
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))

    def to_csv(self, meta: dict) -> str:
        lines = _meta_lines(meta) + [",".join(self.columns)]
        lines += [",".join(_cell(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self, meta: dict) -> str:
        return dumps_json({"meta": meta, "columns": self.columns, "rows": self.rows})


def curves_to_csv(curves, columns: list, meta: dict) -> str:
    """One block per curve, each row prefixed by the curve label, kind and radius."""
    lines = _meta_lines(meta) + [",".join(["curve", "kind", "radius"] + columns)]
    for c in curves:
        head = [c.label, c.kind, fmt_float(c.radius)]
        lines += [",".join(head + [fmt_float(v) for v in p]) for p in c.points]
    return "\n".join(lines) + "\n"


def curves_to_json(curves, columns: list, meta: dict) -> str:
    blocks = [
        {"curve": c.label, "kind": c.kind, "radius": c.radius, "columns": columns, "points": c.points}
        for c in curves
    ]
    return dumps_json({"meta": meta, "blocks": blocks})


def parse_csv_numbers(text: str) -> list:
    """All float cells of a CSV produced here, in order (metadata lines skipped)."""
    out = []
    rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    for ln in rows[1:]:
        for cell in ln.split(","):
            try:
                out.append(float(cell))
            except ValueError:
                pass
    return out
