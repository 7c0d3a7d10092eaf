"""VC-dimension, shadow certificates and extremal search for uniform set systems."""

__version__ = "0.1.0"
