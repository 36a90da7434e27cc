"""Equivariant elliptic genera of type-A ALE spaces: exact q-series engine and checks."""

__version__ = "0.1.0"
