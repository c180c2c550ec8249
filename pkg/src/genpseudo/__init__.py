"""Pseudospectra, generalized SVDs, stability radii and transient growth for pencils (A, M)."""

__version__ = "0.1.0"
