"""Levy Exits - exact classification and Monte Carlo checks of two-sided exits of Levy processes."""

__version__ = "0.1.0"
