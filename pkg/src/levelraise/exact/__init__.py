"""Exact arithmetic over Z, Q and finite fields."""

from .finite_field import GF, FFElement, kernel_mod_ell, poly_roots
from .linalg import det, inverse, nullspace, rank, rref, solve
from .matrix import IntMatrix, RatMatrix, as_int, as_rat
from .normal_forms import (
    SmithForm,
    hnf,
    integer_kernel,
    invariant_factors,
    lattice_intersection,
    saturate,
    smith_normal_form,
)
from .polynomials import char_poly, factor_mod, factor_rational, poly_at_matrix
from .valuation import INF, Valuation, valuation

__all__ = [
    "GF", "FFElement", "kernel_mod_ell", "poly_roots", "det", "inverse", "nullspace", "rank",
    "rref", "solve", "IntMatrix", "RatMatrix", "as_int", "as_rat", "SmithForm", "hnf",
    "integer_kernel", "invariant_factors", "lattice_intersection", "saturate",
    "smith_normal_form", "char_poly", "factor_mod", "factor_rational", "poly_at_matrix",
    "INF", "Valuation", "valuation",
]
