"""Combinatorics of 2-Morse theory and the algebra of the infrared over exact rationals."""

__version__ = "0.1.0"
