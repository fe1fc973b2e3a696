"""Exact tools for homogeneous 2-local representations of multi-virtual braid groups."""

__version__ = "0.1.0"
