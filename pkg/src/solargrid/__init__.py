"""Household load and unit-panel simulation with minimum-area solar LP sizing."""

__version__ = "0.1.0"
