"""Batch figure set: the model-vs-data overlay plus six compartment charts.

Reads trajectory CSVs produced by the saiqh CLI and emits seven PNG files
into an output directory:

    active_overlay.png      discrete + continuous + observed, first 64 days
    infected.png            I,    discrete vs continuous, full range
    susceptible.png         S
    asymptomatic.png        A
    quarantined.png         Q
    hospitalized.png        H
    intensive_care.png      Hbar
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PlotSpec, render

COMPARTMENT_FILES = [
    ("I", "infected.png"),
    ("S", "susceptible.png"),
    ("A", "asymptomatic.png"),
    ("Q", "quarantined.png"),
    ("H", "hospitalized.png"),
    ("Hbar", "intensive_care.png"),
]

OVERLAY_WINDOW_DAYS = 64.0


def make_figures(nsfd: str, rk4: str, observed: str, outdir: str | Path,
                 fig1_nsfd: str | None = None, fig1_rk4: str | None = None) -> list[Path]:
    """Render all seven charts; returns the written paths in a fixed order."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = [render(PlotSpec(
        inputs=[(fig1_nsfd or nsfd, "discrete (NSFD)"), (fig1_rk4 or rk4, "continuous (RK4)")],
        observed=observed, compartment="active",
        out=str(outdir / "active_overlay.png"), t_max=OVERLAY_WINDOW_DAYS))]
    for compartment, filename in COMPARTMENT_FILES:
        written.append(render(PlotSpec(
            inputs=[(nsfd, "discrete (NSFD)"), (rk4, "continuous (RK4)")],
            compartment=compartment, out=str(outdir / filename))))
    return written


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="saiqh-figures", description=__doc__.splitlines()[0])
    parser.add_argument("--nsfd", required=True, help="discrete-scheme trajectory CSV")
    parser.add_argument("--rk4", required=True, help="continuous-reference trajectory CSV")
    parser.add_argument("--observed", required=True, help="observed active-cases CSV")
    parser.add_argument("--outdir", required=True)
    parser.add_argument("--fig1-nsfd", help="finer-step discrete CSV for the overlay "
                                            "(defaults to --nsfd)")
    parser.add_argument("--fig1-rk4", help="finer-step continuous CSV for the overlay "
                                           "(defaults to --rk4)")
    args = parser.parse_args(argv)
    try:
        written = make_figures(args.nsfd, args.rk4, args.observed, args.outdir,
                               fig1_nsfd=args.fig1_nsfd, fig1_rk4=args.fig1_rk4)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
