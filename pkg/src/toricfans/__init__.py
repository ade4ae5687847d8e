"""Exact-arithmetic toric monoids, tight diagrams, colimits, and stacky fans."""

__version__ = "0.1.0"
