"""Readers for the saiqh CSV schemas.

Trajectory CSV: optional leading `# key=value` metadata lines, then the
header `step,t_days,S,A,I,Q,H,Hbar,D,N,lambda` and one row per step.
Observed CSV: header `date,active_cases` with ISO dates.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass, field
from pathlib import Path

TRAJECTORY_COLUMNS = ["step", "t_days", "S", "A", "I", "Q", "H", "Hbar", "D", "N", "lambda"]


class SchemaError(ValueError):
    """A CSV file does not match the documented schema."""


@dataclass
class TrajectoryTable:
    """Column-oriented trajectory data plus its metadata lines."""

    meta: dict[str, str]
    columns: dict[str, list[float]] = field(default_factory=dict)

    @property
    def t_days(self) -> list[float]:
        return self.columns["t_days"]

    def series(self, compartment: str) -> list[float]:
        """One compartment column; `active` sums I + H + Hbar."""
        if compartment == "active":
            return [i + h + hb for i, h, hb in
                    zip(self.columns["I"], self.columns["H"], self.columns["Hbar"])]
        if compartment not in self.columns:
            raise SchemaError(f"unknown compartment {compartment!r}")
        return self.columns[compartment]

    @property
    def t0_offset(self) -> int | None:
        value = self.meta.get("t0_offset")
        return int(value) if value is not None else None


def read_trajectory_csv(path: str | Path) -> TrajectoryTable:
    """Read a trajectory file, naming any missing column in the error."""
    meta: dict[str, str] = {}
    header: list[str] | None = None
    columns: dict[str, list[float]] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if not line:
                continue
            if header is None:
                header = line.split(",")
                missing = [name for name in TRAJECTORY_COLUMNS if name not in header]
                if missing:
                    raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
                columns = {name: [] for name in header}
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise SchemaError(f"{path}: row has {len(parts)} fields, header has {len(header)}")
            for name, part in zip(header, parts):
                columns[name].append(float(part))
    if header is None or not columns.get("t_days"):
        raise SchemaError(f"{path}: no trajectory rows")
    return TrajectoryTable(meta=meta, columns=columns)


def read_observed_csv(path: str | Path) -> tuple[list[datetime.date], list[int]]:
    dates: list[datetime.date] = []
    counts: list[int] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["date", "active_cases"]:
            raise SchemaError(f"{path}: expected header date,active_cases, got {header!r}")
        for row in reader:
            if not row:
                continue
            dates.append(datetime.date.fromisoformat(row[0]))
            counts.append(int(row[1]))
    if not dates:
        raise SchemaError(f"{path}: no observed rows")
    return dates, counts
