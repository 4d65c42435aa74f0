"""Post-processing figures for leipnik CLI runs.

Reads only the documented output files (states.csv, trace.csv,
master_XXXX.csv / slave_XXXX.csv, manifest.json) and renders time series,
phase portraits, space-time surfaces, and a pointwise phase plot.  No
simulation logic lives here.
"""

__version__ = "0.1.0"

from .io import PlotInputError, read_columns, read_run
from .figures import plot_phase, plot_states, plot_surfaces

__all__ = [
    "PlotInputError",
    "read_columns",
    "read_run",
    "plot_states",
    "plot_phase",
    "plot_surfaces",
]
