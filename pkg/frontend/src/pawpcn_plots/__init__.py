"""Figure renderer for the sweep CSVs produced by the pawpcn command line.

Three figure kinds: per-iteration convergence curves, sum rate versus the
number of antennas, and sum rate versus the power split delta.
"""

__version__ = "0.1.0"

from .render import FIGURE_KINDS, FigureSpec, MissingColumnError, render

__all__ = ["FIGURE_KINDS", "FigureSpec", "MissingColumnError", "render",
           "__version__"]
