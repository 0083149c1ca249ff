"""Saturation-attack simulator and optimizer for GMCS CV-QKD.

Thin python layer over the compiled core; every public name comes from the
pybind11 module.
"""

from ._satsim import *  # noqa: F401,F403
from ._satsim import __version__  # noqa: F401
