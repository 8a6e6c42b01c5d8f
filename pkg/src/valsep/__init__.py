"""Exact computations with continuous valuations on small and finitely presented spaces."""

__version__ = "0.1.0"
