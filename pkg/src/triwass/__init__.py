"""Weights, path-metric bounds and Wasserstein distances on complexes of zigzag modules."""

__version__ = "0.1.0"
