"""Exact fields, sparse polynomials and polynomial matrices."""

from .field import DEFAULT_PRIME, RATIONALS, FieldKind, FieldSpec, field_from_json, is_prime, prime_field
from .matrix import PolyMatrix, maximal_minors, poly_determinant
from .poly import (
    MultiPoly,
    count_monomials,
    monomials_of_degree,
    partial_derivative,
    poly_add,
    poly_eval,
    poly_mul,
    restrict_to_linear_subspace,
    univariate_gcd,
    variables,
)

__all__ = [
    "DEFAULT_PRIME", "RATIONALS", "FieldKind", "FieldSpec", "field_from_json", "is_prime", "prime_field",
    "PolyMatrix", "maximal_minors", "poly_determinant",
    "MultiPoly", "count_monomials", "monomials_of_degree", "partial_derivative", "poly_add", "poly_eval",
    "poly_mul", "restrict_to_linear_subspace", "univariate_gcd", "variables",
]
