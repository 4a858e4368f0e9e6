"""Exact-arithmetic tropical homology toolkit."""

__version__ = "0.1.0"
