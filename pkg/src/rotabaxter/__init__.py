"""Exact Rota-Baxter operators on series, species, posets and phase space."""

__version__ = "0.1.0"
