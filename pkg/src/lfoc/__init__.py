"""Workbench for the polarized calculus L_foc and its quantitative type systems."""

__version__ = "0.1.0"
