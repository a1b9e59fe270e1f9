"""Detect inconsistent variable names from how values flow through code."""

__version__ = '0.1.0'
