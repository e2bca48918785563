"""Pronilpotent quotients of ω-presented groups of primitive substitutions."""

__version__ = "0.1.0"
