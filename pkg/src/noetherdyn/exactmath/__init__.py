"""Exact arithmetic substrate: rationals, polynomials, matrices, real algebraic numbers."""

from .matrix import DimensionError, RationalMatrix, char_poly, det_bareiss, nullspace, rank, row_echelon
from .numfield import NFElement, exact_str, nf_arith, nf_sign
from .poly import (
    Poly,
    format_rational,
    parse_rational,
    poly_gcd,
    poly_xgcd,
    squarefree_decomposition,
    squarefree_part,
)
from .roots import (
    AlgebraicNumber,
    InvalidInputError,
    NotFoundError,
    isolate_real_roots,
    largest_real_root,
    rational_roots,
    real_roots,
    root_multiplicity,
    sturm_count,
    sturm_sequence,
)

__all__ = [
    "AlgebraicNumber",
    "DimensionError",
    "InvalidInputError",
    "NFElement",
    "NotFoundError",
    "Poly",
    "RationalMatrix",
    "char_poly",
    "det_bareiss",
    "exact_str",
    "format_rational",
    "isolate_real_roots",
    "largest_real_root",
    "nf_arith",
    "nf_sign",
    "nullspace",
    "parse_rational",
    "poly_gcd",
    "poly_xgcd",
    "rank",
    "rational_roots",
    "real_roots",
    "root_multiplicity",
    "row_echelon",
    "squarefree_decomposition",
    "squarefree_part",
    "sturm_count",
    "sturm_sequence",
]
