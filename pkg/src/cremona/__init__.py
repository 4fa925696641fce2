"""Birational maps of projective space built from cubic hypersurfaces."""

__version__ = "0.1.0"
