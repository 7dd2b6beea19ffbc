"""Coding and adversarial evaluation for compound and arbitrarily varying quantum channels."""

__version__ = "0.1.0"
