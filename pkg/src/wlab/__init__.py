"""Numerical toolkit for Weierstrass data of minimal surfaces in R^4."""
__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402,F401
