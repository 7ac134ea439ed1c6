"""Exact homological algebra for N-complexes over k[x]/(x^m)."""

__version__ = "0.1.0"
