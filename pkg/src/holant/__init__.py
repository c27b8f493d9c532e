"""Exact-arithmetic toolkit for complex-valued Boolean Holant problems."""

__version__ = "0.1.0"
