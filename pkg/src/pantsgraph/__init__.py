"""Pants graphs, Farey graphs and subsurface projections with exact arithmetic."""

__version__ = "0.1.0"
