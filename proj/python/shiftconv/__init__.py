"""Exact q-series, Poincare coefficients and 3-adic checks for eta(3z)^8."""

from ._shiftconv import *  # noqa: F401,F403
from ._shiftconv import __doc__  # noqa: F401

__version__ = "0.1.0"
