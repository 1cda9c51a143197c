"""Geometric combinatorics of monic complex polynomials."""

__version__ = "0.1.0"
