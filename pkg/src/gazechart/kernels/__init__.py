"""Density kernel backend selection.

Imports the compiled extension when it was built, otherwise falls back
to the numpy implementation. Set GAZECHART_PURE_PYTHON=1 to force the
fallback (useful for benchmarking and debugging). BACKEND names the
implementation actually in use.
"""

import os

from . import _kde_py

if os.environ.get("GAZECHART_PURE_PYTHON", "").strip() not in ("", "0"):
    BACKEND = "python"
    gaussian_grid = _kde_py.gaussian_grid
else:
    try:
        from . import _kde_cy

        BACKEND = "compiled"
        gaussian_grid = _kde_cy.gaussian_grid
    except ImportError:
        BACKEND = "python"
        gaussian_grid = _kde_py.gaussian_grid

__all__ = ["BACKEND", "gaussian_grid"]
