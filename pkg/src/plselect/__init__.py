"""Exact continuous root selection for factored piecewise-linear polynomials
on one-dimensional complexes."""

__version__ = "0.1.0"
