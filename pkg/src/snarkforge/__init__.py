"""Tetrahedral flows, transition relations and snark families."""

__version__ = "0.1.0"
