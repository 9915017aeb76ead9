"""Exact multivariate polynomial arithmetic with resultants, discriminants,
gcd, exact division, square-free decomposition, and univariate root isolation."""

from .gcdtools import (
    DivisionError,
    NotASquareError,
    divides,
    exact_divide,
    extract_factor,
    poly_gcd,
    poly_gcd_many,
    poly_sqrt_scaled,
    radical,
    squarefree_part,
    yun_squarefree,
)
from .poly import KNOWN_VARIABLE_ORDER, Polynomial, poly, variable_key, variables
from .ratfunc import RatFunc, substitute_ratfuncs
from .resultant import (
    ResultantError,
    bareiss_determinant,
    discriminant,
    resultant,
    resultant_univariate_float,
    resultant_with_constants,
    sylvester_matrix,
)
from .roots import (
    ComplexPair,
    RealRoot,
    RootError,
    RootSet,
    WidthError,
    aberth_roots,
    isolate_real_roots,
    real_roots_in,
    refine_interval,
    roots,
)

__all__ = [
    "KNOWN_VARIABLE_ORDER",
    "Polynomial",
    "poly",
    "variables",
    "variable_key",
    "RatFunc",
    "substitute_ratfuncs",
    "DivisionError",
    "NotASquareError",
    "divides",
    "exact_divide",
    "extract_factor",
    "poly_gcd",
    "poly_gcd_many",
    "poly_sqrt_scaled",
    "radical",
    "squarefree_part",
    "yun_squarefree",
    "ResultantError",
    "bareiss_determinant",
    "discriminant",
    "resultant",
    "resultant_univariate_float",
    "resultant_with_constants",
    "sylvester_matrix",
    "ComplexPair",
    "RealRoot",
    "RootError",
    "RootSet",
    "WidthError",
    "aberth_roots",
    "isolate_real_roots",
    "real_roots_in",
    "refine_interval",
    "roots",
]
