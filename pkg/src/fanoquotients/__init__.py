"""Exact-arithmetic invariants of quotients of the Fano surface of a cubic threefold."""

__version__ = "0.1.0"
