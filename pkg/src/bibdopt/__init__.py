"""Metaheuristics for balanced incomplete block designs."""

__version__ = "0.1.0"
