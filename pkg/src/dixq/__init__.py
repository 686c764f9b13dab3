"""Exact construction and verification of rank-2 commuting difference
operators on the elliptic curve w^2 = z^4 + c2 z^2 + c1 z + 1."""
from .arith import QQ, SYMBOLIC, LaurentSeries, Poly, QuadExtField, RatFunc, RatFuncField
from .builder import (
    AffineMatch,
    BasisReduction,
    PolynomialFamily,
    build_L2_closed,
    build_L_generic,
    match_affine,
    normalize_L2,
    polynomial_family,
    polynomial_family_operators,
    polynomial_family_params,
    reduce_basis,
    verify_identities,
)
from .curve import CurveParams, FieldElement, branch_w_series, expand_at_Q, lambda_m
from .eigen import CurvePoint, EigenReport, PsiWindow, psi_window, residual_check
from .errors import (
    DixqError,
    DomainError,
    InterpolationError,
    LinearSystemError,
    SeriesPrecisionError,
    VerificationError,
)
from .expr import ParseError, parse_param_expr, parse_ratfunc
from .operators import BCRelation, DifferenceOperator, bc_relation, commutator, compose
from .spectral import (
    ChiPair,
    ParameterSequences,
    chi_pair,
    chi_pair_at,
    check_kn_constraints,
    check_kn_identities,
    series_coeffs_closed,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMatch",
    "BasisReduction",
    "bc_relation",
    "BCRelation",
    "branch_w_series",
    "build_L2_closed",
    "build_L_generic",
    "check_kn_constraints",
    "check_kn_identities",
    "chi_pair",
    "chi_pair_at",
    "ChiPair",
    "commutator",
    "compose",
    "CurveParams",
    "CurvePoint",
    "DifferenceOperator",
    "DixqError",
    "DomainError",
    "EigenReport",
    "expand_at_Q",
    "FieldElement",
    "InterpolationError",
    "lambda_m",
    "LaurentSeries",
    "LinearSystemError",
    "match_affine",
    "normalize_L2",
    "ParameterSequences",
    "parse_param_expr",
    "parse_ratfunc",
    "ParseError",
    "Poly",
    "polynomial_family",
    "polynomial_family_operators",
    "polynomial_family_params",
    "PolynomialFamily",
    "psi_window",
    "PsiWindow",
    "QQ",
    "QuadExtField",
    "RatFunc",
    "RatFuncField",
    "reduce_basis",
    "residual_check",
    "series_coeffs_closed",
    "SeriesPrecisionError",
    "SYMBOLIC",
    "VerificationError",
    "verify_identities",
]
