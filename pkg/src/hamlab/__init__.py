"""Numerical laboratory for Walsh-Fourier analysis, heat smoothing and
Bernstein-Markov type estimates on the Hamming cube."""

__version__ = "0.1.0"
