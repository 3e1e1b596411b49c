"""Clumsy packings: minimum maximal edge-disjoint H-packings of graphs."""

__version__ = "0.1.0"
