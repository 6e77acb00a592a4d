"""Quantum channels and the environments that implement them."""

__version__ = "0.1.0"
