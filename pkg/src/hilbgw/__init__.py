"""Exact genus-1 computations for the Hilbert scheme of points of the plane."""

__version__ = "0.1.0"
