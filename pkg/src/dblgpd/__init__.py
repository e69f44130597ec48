"""Finite double groupoids: construction, verification and the structure theory around them."""

__version__ = "0.1.0"
