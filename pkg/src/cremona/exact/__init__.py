"""Exact arithmetic substrate: fields, polynomials, integer matrices, real roots."""

from .fields import GF, QQ, FieldSpec, cube_root_of_unity, random_primes
from .matrix import (
    IntMatrix,
    as_matrix,
    char_poly,
    det_bareiss,
    identity,
    mat_mul,
    mat_pow,
    mat_product,
    mat_vec,
)
from .mpoly import MultiPoly, polys_from_strings
from .roots import AlgebraicReal, isolate_real_roots, largest_real_root, rational_roots, real_roots
from .unipoly import UniPoly

__all__ = [
    "GF", "QQ", "FieldSpec", "cube_root_of_unity", "random_primes",
    "IntMatrix", "as_matrix", "char_poly", "det_bareiss", "identity", "mat_mul", "mat_pow",
    "mat_product", "mat_vec", "MultiPoly", "polys_from_strings", "AlgebraicReal",
    "isolate_real_roots", "largest_real_root", "rational_roots", "real_roots", "UniPoly",
]
