"""Exact symbolic engine for graded vertex algebroids over Laurent chart rings."""

__version__ = "0.1.0"
