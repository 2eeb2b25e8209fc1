"""Computable criteria for x^p + y^p = z^q and the rational Catalan equation X^p + Y^q = 1."""

from .ntcore import PrimePair

__version__ = "0.1.0"

__all__ = ["PrimePair", "__version__"]
