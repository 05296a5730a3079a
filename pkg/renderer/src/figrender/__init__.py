"""Static figure rendering for spectral-efficiency sweep CSVs.

Strictly downstream of the CSV format: the renderer never computes new
numbers, it only groups, sorts and plots the columns it is given. That
makes the plotted (x, y) arrays checksum-comparable against the CSV.
"""

__version__ = "0.1.0"

from .errors import (EmptyDatasetError, MissingColumnError, RenderError,
                     SpecError)
from .spec import FIGURE_KINDS, FigureSpec, load_spec
from .render import (dataset_checksum, extract_plotted_series, figure_checksum,
                     load_dataset, render, series_for)

__all__ = [name for name in dir() if not name.startswith("_")]
