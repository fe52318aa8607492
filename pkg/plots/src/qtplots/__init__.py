"""Figure rendering for qtsim CSV outputs: arrival-time densities,
SQT-vs-TQ overlays, fringe combs, dispersion curves.

Consumes only the public CSV contract (header row, comma separated);
the simulation package is never imported.
"""

from .figures import FigureSpec, render

__all__ = ["FigureSpec", "render"]
__version__ = "0.1.0"
