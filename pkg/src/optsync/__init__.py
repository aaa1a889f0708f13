"""Optimal directed graphs for network synchronization.

Construction of almost regular digraphs with minimal Laplacian eigenvalue
spread, exact certification of their spectra, and brute-force checks of
the underlying bounds at small sizes.
"""

from .construct import TreeSpec, build, build_sequence, enumerate_trees, make_tree
from .digraph import DiGraph, complement, make_digraph, transpose
from .polynomial import IntPolynomial
from .spectral import (
    Spectrum,
    char_poly_exact,
    laplacian,
    matches_optimal_spectrum,
    sigma_squared,
    spectrum_numeric,
    spread_parameters,
)

__all__ = [
    "DiGraph",
    "IntPolynomial",
    "Spectrum",
    "TreeSpec",
    "build",
    "build_sequence",
    "char_poly_exact",
    "complement",
    "enumerate_trees",
    "laplacian",
    "make_digraph",
    "make_tree",
    "matches_optimal_spectrum",
    "sigma_squared",
    "spectrum_numeric",
    "spread_parameters",
    "transpose",
]
__version__ = "0.1.0"
