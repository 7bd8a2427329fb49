"""Extreme eigenvalues of the GUE: Fredholm determinants, Tracy-Widom F2, correlations."""

__version__ = "0.1.0"
