"""Mahler sums - rigorous evaluation and case analysis of Mahler-type series."""

__version__ = "0.1.0"
