"""Singularity analysis of constraint map-germs under K[G]-equivalence."""

__version__ = "0.1.0"
