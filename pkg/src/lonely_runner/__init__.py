"""Exact computations around the Lonely Runner Conjecture."""

__version__ = "0.1.0"
