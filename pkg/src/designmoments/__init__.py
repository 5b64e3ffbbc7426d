"""Moments of randomly measured qubit correlations, evaluated with designs."""

__version__ = "0.1.0"
