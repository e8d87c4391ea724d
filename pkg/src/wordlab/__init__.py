"""Exact-enumeration laboratory for word maps on finite groups."""

__version__ = "0.1.0"
