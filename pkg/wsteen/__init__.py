"""Verification engine for the motivic dual Steenrod algebra and its Witt-theoretic relatives."""

__version__ = "0.3.0"
