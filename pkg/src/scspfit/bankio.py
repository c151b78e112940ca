"""Reading and writing filter banks in the MKF text format.

Layout::

    mkf 1
    <count> <rows> <cols>
    <name>
    <rows lines of cols reals>
    ...

Row 0 is the top row (y = +radius_y); column 0 is x = -radius_x.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .exceptions import BankFormatError
from .kernels import FilterGrid


class DimensionError(BankFormatError):
    pass


class NonFiniteError(BankFormatError):
    pass


@dataclass
class FilterBank:
    entries: list[tuple[str, FilterGrid]] = field(default_factory=list)
    source: str = "generated"

    def __post_init__(self):
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("filter names must be unique")
        for n in names:
            if not n or any(c.isspace() for c in n):
                raise ValueError(f"invalid filter name {n!r}")
        shapes = {g.shape for _, g in self.entries}
        if len(shapes) > 1:
            raise ValueError(f"all grids must share one support, got {sorted(shapes)}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, FilterGrid]]:
        return iter(self.entries)

    def __getitem__(self, name: str) -> FilterGrid:
        for n, g in self.entries:
            if n == name:
                return g
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.entries]


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def dumps_bank(bank: FilterBank) -> str:
    if len(bank):
        rows, cols = bank.entries[0][1].shape
    else:
        rows = cols = 0
    lines = ["mkf 1", f"{len(bank)} {rows} {cols}"]
    for name, grid in bank:
        lines.append(name)
        for row in grid.values:
            lines.append(" ".join(_fmt(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def save_bank(bank: FilterBank, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_bank(bank))


def loads_bank(text: str, source: str = "<string>") -> FilterBank:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def line(i: int) -> str:
        if i >= len(lines):
            raise BankFormatError("unexpected end of file", i + 1)
        return lines[i].rstrip("\r")

    if line(0).split() != ["mkf", "1"]:
        raise BankFormatError("expected header 'mkf 1'", 1)
    head = line(1).split()
    try:
        count, rows, cols = (int(t) for t in head)
        if len(head) != 3 or min(count, rows, cols) < 0:
            raise ValueError
    except ValueError:
        raise BankFormatError("expected '<count> <rows> <cols>' as non-negative integers", 2) from None

    entries = []
    i = 2
    for _ in range(count):
        name = line(i).strip()
        if not name or len(name.split()) != 1:
            raise BankFormatError(f"invalid filter name {name!r}", i + 1)
        if rows % 2 == 0 or cols % 2 == 0:
            raise DimensionError(f"filter {name!r}: dimensions {rows}x{cols} are not odd", i + 1)
        i += 1
        values = np.empty((rows, cols))
        for r in range(rows):
            toks = line(i).split()
            if len(toks) != cols:
                raise DimensionError(f"filter {name!r}: expected {cols} values, found {len(toks)}", i + 1)
            try:
                values[r] = [float(t) for t in toks]
            except ValueError:
                raise BankFormatError(f"filter {name!r}: unparsable number", i + 1) from None
            if not all(math.isfinite(v) for v in values[r]):
                raise NonFiniteError(f"filter {name!r}: non-finite value", i + 1)
            i += 1
        entries.append((name, FilterGrid(values)))
    if any(l.strip() for l in lines[i:]):
        raise BankFormatError("trailing content after the last filter", i + 1)
    try:
        return FilterBank(entries, source)
    except ValueError as exc:
        raise BankFormatError(str(exc)) from None


def load_bank(path) -> FilterBank:
    with open(path, encoding="utf-8") as fh:
        return loads_bank(fh.read(), os.fspath(path))
