"""Single-chart rendering of trajectory CSVs, with optional observed overlay.

Output files are deterministic across reruns: fixed figure geometry, the
Agg backend, and no timestamp or software metadata in the PNG.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .csvio import SchemaError, read_observed_csv, read_trajectory_csv

COMPARTMENTS = ("S", "A", "I", "Q", "H", "Hbar", "active")

AXIS_LABELS = {
    "S": "susceptible (persons)",
    "A": "asymptomatic (persons)",
    "I": "infected (persons)",
    "Q": "quarantined (persons)",
    "H": "hospitalized (persons)",
    "Hbar": "intensive care (persons)",
    "active": "active cases I + H + Hbar (persons)",
}

FIGURE_SIZE = (8.0, 5.0)
DPI = 110


@dataclass
class PlotSpec:
    """One chart: trajectory curves, optional observed points, one compartment."""

    inputs: list[tuple[str, str]]  # (csv path, legend label)
    out: str
    compartment: str = "active"
    observed: str | None = None
    t_max: float | None = None

    def __post_init__(self) -> None:
        if not self.inputs:
            raise ValueError("at least one trajectory input is required")
        if self.compartment not in COMPARTMENTS:
            raise ValueError(f"compartment must be one of {'|'.join(COMPARTMENTS)} "
                             f"(got {self.compartment!r})")
        if self.t_max is not None and not self.t_max > 0:
            raise ValueError(f"t_max must be > 0 (got {self.t_max!r})")


def _clip(t_values, y_values, t_max):
    if t_max is None:
        return t_values, y_values
    pairs = [(t, y) for t, y in zip(t_values, y_values) if t <= t_max]
    return [t for t, _ in pairs], [y for _, y in pairs]


def render(spec: PlotSpec) -> Path:
    """Render one chart to spec.out; returns the written path."""
    fig, ax = plt.subplots(figsize=FIGURE_SIZE, dpi=DPI)
    anchor = None
    for path, label in spec.inputs:
        table = read_trajectory_csv(path)
        if anchor is None:
            anchor = table.t0_offset
        t_values, y_values = _clip(table.t_days, table.series(spec.compartment), spec.t_max)
        ax.plot(t_values, y_values, label=label, linewidth=1.6)
    if spec.observed is not None:
        dates, counts = read_observed_csv(spec.observed)
        if anchor is None:
            raise SchemaError("observed overlay needs a trajectory with t0_offset metadata")
        t_values = [date.toordinal() - anchor for date in dates]
        t_values, counts = _clip(t_values, counts, spec.t_max)
        ax.plot(t_values, counts, linestyle=":", color="black", marker=".",
                markersize=3, linewidth=1.0, label="observed")
    ax.set_xlabel("days since start")
    ax.set_ylabel(AXIS_LABELS[spec.compartment])
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = Path(spec.out)
    fig.savefig(out, metadata={"Software": None})
    plt.close(fig)
    return out


def _parse_input(raw: str) -> tuple[str, str]:
    path, sep, label = raw.rpartition(":")
    if not sep or not path:
        raise ValueError(f"--inputs expects PATH:LABEL (got {raw!r})")
    return path, label


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="saiqh-plot",
                                     description="Render one compartment chart from "
                                                 "trajectory CSVs.")
    parser.add_argument("--inputs", action="append", required=True, metavar="PATH:LABEL",
                        help="trajectory CSV with a legend label; repeatable")
    parser.add_argument("--observed", help="observed active-cases CSV to overlay")
    parser.add_argument("--compartment", default="active", choices=COMPARTMENTS)
    parser.add_argument("--out", required=True, help="output image path (png)")
    parser.add_argument("--t-max", type=float, dest="t_max",
                        help="clip the time axis at this many days")
    args = parser.parse_args(argv)
    try:
        spec = PlotSpec(inputs=[_parse_input(raw) for raw in args.inputs],
                        observed=args.observed, compartment=args.compartment,
                        out=args.out, t_max=args.t_max)
        out = render(spec)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
