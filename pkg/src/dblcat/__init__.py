"""Finite strict double categories, pi2-indexings and their crossed products."""

__version__ = "0.1.0"
