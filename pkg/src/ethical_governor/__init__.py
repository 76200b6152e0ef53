"""Verifiable ethical consequence engine with a grid-world case study and checker."""

__version__ = "0.1.0"
