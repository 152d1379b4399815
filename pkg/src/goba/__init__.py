"""Quasi-orthogonal cocycles, generalized optimal binary arrays and negaperiodic Golay pairs."""

__version__ = "0.1.0"
