"""Finite generalised polygons: constructions, automorphisms, exact feasibility."""

__version__ = "0.1.0"
