"""Branched covers of the disk from edge-colored trees, lifting of braid
twists, and the tower construction that turns a link into a knot."""

__version__ = "0.1.0"
