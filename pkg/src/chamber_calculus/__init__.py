"""Combinatorial engine for flagged chamber complex decompositions."""

__version__ = "0.1.0"
