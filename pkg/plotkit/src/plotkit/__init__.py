"""Figure rendering for the simulator's CSV output (no physics recomputed)."""

__version__ = "0.1.0"

from .figures import BUILDERS, TIME_LABEL, FigureSpec, build_figure, render
from .io import (EmptyCSVError, MissingColumnError, read_timeseries,
                 require_columns, split_by_label)

__all__ = [
    "__version__", "BUILDERS", "TIME_LABEL", "FigureSpec", "build_figure",
    "render", "EmptyCSVError", "MissingColumnError", "read_timeseries",
    "require_columns", "split_by_label",
]
