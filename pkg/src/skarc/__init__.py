"""Solovay-Kitaev synthesis and randomized compilation over {H, S, T}."""

__version__ = "0.1.0"
