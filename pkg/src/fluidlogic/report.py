"""Run reports shared by every CLI verb, with JSON, table and CSV renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

SCHEMA = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DIVERGED = 2
EXIT_NO_STEADY_STATE = 3
EXIT_MISMATCH = 4


def fmt_value(v: Any) -> str:
    """Locale-independent cell text; floats keep 9 significant digits."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".9g")
    return str(v)


def _clean(v: Any) -> Any:
    # JSON has no NaN/inf
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    return v


@dataclass
class RunReport:
    verb: str
    command: list[str]
    columns: list[str] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    status: int = EXIT_OK

    def to_json(self) -> str:
        doc = {"schema": SCHEMA, **_clean(asdict(self))}
        return json.dumps(doc, indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
        doc.pop("schema")
        return cls(**doc)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt_value(v) for v in row])
        return buf.getvalue()

    def to_table(self) -> str:
        lines = []
        if self.columns:
            cells = [self.columns] + [[fmt_value(v) for v in r] for r in self.rows]
            widths = [max(len(r[k]) for r in cells) for k in range(len(self.columns))]
            for k, r in enumerate(cells):
                lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
                if k == 0:
                    lines.append("  ".join("-" * w for w in widths))
        for key, value in self.data.items():
            if isinstance(value, str) and "\n" in value:
                lines.append(f"{key}:")
                lines.extend("  " + ln for ln in value.rstrip("\n").splitlines())
            elif isinstance(value, list):
                lines.append(f"{key}:")
                lines.extend(f"  {fmt_value(v)}" for v in value)
            else:
                lines.append(f"{key}: {fmt_value(value)}")
        lines.extend(f"warning: {w}" for w in self.warnings)
        lines.append(f"status: {self.status}")
        return "\n".join(lines) + "\n"
