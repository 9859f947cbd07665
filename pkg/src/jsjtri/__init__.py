"""Closed 3-manifold triangulations with a prescribed JSJ graph."""

__version__ = "0.1.0"
