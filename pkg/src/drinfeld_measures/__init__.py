"""Measures of Drinfeld cusp forms on the Bruhat-Tits tree, computed exactly in characteristic p."""

from .errors import DrinfeldError
from .field import GF, FiniteField
from .poly import PolyT
from .series import LaurentSeries

__all__ = ["DrinfeldError", "GF", "FiniteField", "PolyT", "LaurentSeries"]
__version__ = "0.1.0"
