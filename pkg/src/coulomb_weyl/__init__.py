"""Exact Weyl-descent data for Coulomb branches of quaternionic representations."""

__version__ = "0.1.0"
