"""Numerical laboratory for barotropic viscous compressible multi-fluid flows."""

__version__ = "0.1.0"
