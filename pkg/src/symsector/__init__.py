"""Sector and monotonicity calculus for linear symplectic maps."""

__version__ = "0.1.0"
