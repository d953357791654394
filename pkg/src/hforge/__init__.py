"""Exact and numerical tools for Weyl-Heisenberg, Clifford and Galois-unitary structures."""

__version__ = "0.1.0"
