"""Chart rendering for saiqh trajectory and observed-case CSV files."""

from .csvio import SchemaError, TrajectoryTable, read_observed_csv, read_trajectory_csv
from .figures import make_figures
from .render import COMPARTMENTS, PlotSpec, render

__version__ = "0.1.0"

__all__ = ["COMPARTMENTS", "PlotSpec", "SchemaError", "TrajectoryTable",
           "make_figures", "read_observed_csv", "read_trajectory_csv", "render",
           "__version__"]
