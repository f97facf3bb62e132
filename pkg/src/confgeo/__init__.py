"""Conformable (alpha-deformed) differential geometry and Hamiltonian engine."""

__version__ = "0.1.0"
