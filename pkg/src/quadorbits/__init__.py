"""Exact classification of quadratic maps of the plane up to affine equivalence."""

__version__ = "0.1.0"
