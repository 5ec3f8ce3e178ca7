"""Verification engine for determinants of Legendre-symbol matrices over finite fields."""

__version__ = "0.1.0"
