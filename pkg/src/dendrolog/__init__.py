"""Parameterized trees, predilators and beta-proof search at finite scale."""

__version__ = "0.1.0"
