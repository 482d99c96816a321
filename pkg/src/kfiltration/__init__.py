"""Knot Floer filtration toolkit: Alexander polynomials, staircase complexes,
the invariants tau, nu, nu', epsilon and checks of staircase identities."""

__version__ = "0.1.0"
