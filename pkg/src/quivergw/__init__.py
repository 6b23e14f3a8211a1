"""Quivers from log Calabi-Yau toric models, their refined DT invariants,
and the matching scattering-diagram generating blocks."""

__version__ = "0.1.0"
