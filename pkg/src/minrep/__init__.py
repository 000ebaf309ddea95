"""Exact computational checks for the minimal representations of D_k and E_k."""

__version__ = "0.1.0"
