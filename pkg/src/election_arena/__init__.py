"""Deterministic simulator and analysis toolkit for bully-style leader election."""

__version__ = "0.1.0"
