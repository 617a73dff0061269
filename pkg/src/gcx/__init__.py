"""Exact toolkit for blow-ups in generalized complex geometry."""

__version__ = "0.1.0"
