"""Exact computational Lie theory toolkit."""

__version__ = "0.1.0"
