"""Cohomological dynamics of Noetherian birational maps f = L o J on projective space."""

__version__ = "0.1.0"
