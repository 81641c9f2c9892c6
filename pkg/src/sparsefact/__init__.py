"""Sparse multivariate polynomial factorization over the integers."""

from .bifactor import BiFactorization, factor_bivariate
from .errors import (
    BackendError,
    HeuristicGCDFailed,
    NotDivisible,
    NotIntegral,
    NotSquarefreeError,
    NotXDistinct,
    OracleInconclusive,
    PolySyntaxError,
    StructuralError,
    UnluckyEvaluation,
)
from .kronecker import kronecker_oracle
from .poly import BiPoly, MultiPoly, exact_div, heu_gcd, weighted_substitute
from .sparselift import Config, FallbackReason, SparseFactorOutcome, factor, sparse_factor
from .textio import format_poly, parse
from .unifactor import factor_univariate

__all__ = [
    "BackendError", "BiFactorization", "BiPoly", "Config", "FallbackReason", "HeuristicGCDFailed",
    "MultiPoly", "NotDivisible", "NotIntegral", "NotSquarefreeError", "NotXDistinct",
    "OracleInconclusive", "PolySyntaxError", "SparseFactorOutcome", "StructuralError",
    "UnluckyEvaluation", "exact_div", "factor", "factor_bivariate", "factor_univariate",
    "format_poly", "heu_gcd", "kronecker_oracle", "parse", "sparse_factor", "weighted_substitute",
]
