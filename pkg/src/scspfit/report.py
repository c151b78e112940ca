"""Fixed-precision tables emitted as CSV or Markdown."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Sequence


def format_number(v, precision: int = 3) -> str:
    """Round half-even on the shortest decimal repr of ``v``."""
    if isinstance(v, str):
        return v
    if v is None:
        return "---"
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    q = Decimal(repr(v)).quantize(Decimal(1).scaleb(-precision), rounding=ROUND_HALF_EVEN)
    if q == 0:
        q = abs(q)
    return f"{q:f}"


@dataclass
class ReportTable:
    title: str
    headers: Sequence[str]
    rows: list[list] = field(default_factory=list)
    precision: int = 3

    def __post_init__(self):
        for r in self.rows:
            self._check(r)

    def _check(self, row) -> None:
        if len(row) != len(self.headers):
            raise ValueError(f"row has {len(row)} cells, table {self.title!r} has {len(self.headers)} columns")

    def add_row(self, row) -> None:
        self._check(row)
        self.rows.append(list(row))

    def cells(self) -> list[list[str]]:
        return [[format_number(c, self.precision) for c in r] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.headers)
        w.writerows(self.cells())
        return buf.getvalue()

    def to_markdown(self) -> str:
        out = [f"### {self.title}", "",
               "| " + " | ".join(self.headers) + " |",
               "|" + "|".join("---" for _ in self.headers) + "|"]
        out += ["| " + " | ".join(r) + " |" for r in self.cells()]
        return "\n".join(out) + "\n"
