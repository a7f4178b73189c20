"""Legendre parameters and j-invariants of CM elliptic curves."""

__version__ = "0.1.0"
