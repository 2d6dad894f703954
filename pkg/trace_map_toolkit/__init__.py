"""Trace maps of two-letter substitution rules and their applications."""

__version__ = "0.1.0"
