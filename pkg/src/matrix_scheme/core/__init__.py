"""Exact and numeric arithmetic substrate."""

from .matrix import (DenseMatrix, char_poly, hstack, inverse, kernel_basis, mat_mul,
                     poly_at_matrix, rank, rref, substitute, vectors_rank)
from .poly import (MultiPoly, count_real_roots, divides, poly_divmod, poly_gcd,
                   rational_roots, remainder_factor, squarefree_decomposition)
from .scalar import DEFAULT_TOL, EXACT, NUMERIC, GaussianRational, mode_of, normalize
from .spectral import SpectralBlock, joint_spectral

__all__ = [
    "DenseMatrix", "char_poly", "hstack", "inverse", "kernel_basis", "mat_mul",
    "poly_at_matrix", "rank", "rref", "substitute", "vectors_rank",
    "MultiPoly", "count_real_roots", "divides", "poly_divmod", "poly_gcd",
    "rational_roots", "remainder_factor", "squarefree_decomposition",
    "DEFAULT_TOL", "EXACT", "NUMERIC", "GaussianRational", "mode_of", "normalize",
    "SpectralBlock", "joint_spectral",
]
