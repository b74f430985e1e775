"""Numerical laboratory for depth-2 vs depth-3 separation of inner-product
functions f(<x, x'>) on the sphere."""

__version__ = "0.1.0"
