"""Result tables and their CSV representation."""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_HEADER = re.compile(r"^(?P<name>[^\[\]]+)\[(?P<unit>[^\[\]]*)\]$")


@dataclass
class ResultTable:
    """Columns with units, numeric rows, provenance and scalar summaries.

    ``provenance`` holds ``hash``, ``step``, ``nodes`` and ``version``;
    ``summary`` holds the scalar acceptance quantities printed by the CLI.
    """

    columns: tuple[str, ...]
    units: tuple[str, ...]
    rows: np.ndarray
    provenance: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if len(self.columns) != len(self.units):
            raise ValueError("every column needs a unit annotation")
        if self.rows.shape[1] != len(self.columns):
            raise ValueError(f"rows have {self.rows.shape[1]} columns, expected {len(self.columns)}")

    def __getitem__(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def __len__(self) -> int:
        return self.rows.shape[0]

    def to_csv_text(self) -> str:
        p = self.provenance
        lines = [
            f"# provenance: {p.get('hash', '-')} {p.get('step', '-')} {p.get('nodes', '-')} {p.get('version', '-')}",
            ",".join(f"{c}[{u}]" for c, u in zip(self.columns, self.units)),
        ]
        lines += [",".join(f"{x:.12g}" for x in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> Path:
        """Write atomically: the target appears only once fully written."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.to_csv_text())
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
        return path


def read_csv(path: str | Path) -> ResultTable:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        header = fh.readline().rstrip("\n")
        body = fh.read()
    if not first.startswith("# provenance:"):
        raise ValueError("missing provenance line")
    parts = first.split(":", 1)[1].split()
    provenance = dict(zip(("hash", "step", "nodes", "version"), parts))
    names, units = [], []
    for cell in header.split(","):
        m = _HEADER.match(cell)
        if not m:
            raise ValueError(f"column header {cell!r} lacks a [unit]")
        names.append(m["name"])
        units.append(m["unit"])
    rows = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2) if body.strip() else np.empty((0, len(names)))
    return ResultTable(tuple(names), tuple(units), rows, provenance)
