"""Plane birational maps: base points, infinitely near points and their dynamics."""
