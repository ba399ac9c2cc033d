"""Integral homology of moduli of slit surfaces."""

__version__ = "0.1.0"
