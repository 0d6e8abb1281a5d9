"""Dimer models on surfaces, their zigzag geometry, perfect-matching
polygons, mirror duals, and exceptional sequences on toric weak Fano
surfaces -- exact (integer/rational) throughout."""

__version__ = "0.1.0"
