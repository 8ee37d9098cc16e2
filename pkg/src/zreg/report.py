"""Row tables with CSV/JSON serialization used by every diagnostic report."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _jsonable(v: Any) -> Any:
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return _jsonable(v.item())
    return str(v)


def _csv_cell(v: Any) -> str:
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return _csv_cell(v.item())
    return str(v)


@dataclass
class Table:
    """Named columns plus free-form metadata.

    Complex cells are split by the caller into re/im columns; CSV output
    prints floats with 17 significant digits so values round-trip.
    """

    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))

    def column(self, name: str) -> list[Any]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def records(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, r)) for r in self.rows]

    def to_csv(self, with_metadata: bool = True) -> str:
        buf = io.StringIO()
        if with_metadata and self.metadata:
            buf.write("# " + json.dumps(_jsonable(self.metadata), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_csv_cell(v) for v in r])
        return buf.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return {
            "columns": list(self.columns),
            "rows": _jsonable(self.rows),
            "metadata": _jsonable(self.metadata),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Table":
        return cls(list(d["columns"]), [list(r) for r in d["rows"]], dict(d.get("metadata", {})))
