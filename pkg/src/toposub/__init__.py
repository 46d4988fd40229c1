"""Topological substitutions, dual substitutions and the bijection between their tilings."""

__version__ = "0.1.0"
