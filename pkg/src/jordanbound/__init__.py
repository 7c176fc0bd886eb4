"""Abelian normal subgroups of bounded index in finite complex matrix groups."""

__version__ = "0.1.0"
