"""Eta-quotient congruences: q-series, modular equations, and partition checks."""

__version__ = "0.1.0"
