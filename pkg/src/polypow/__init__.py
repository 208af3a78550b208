"""Coefficient patterns of powers of polynomials over prime fields.

Rows of f^k mod p form a two-dimensional pattern; this package counts its
length-n windows (line complexity), evaluates the associated recursions and
generating functions, computes the piecewise-quadratic limit of a(n)/n^2, and
for p=2 extracts nonzero-count growth rates and fractal dimensions from exact
transfer-matrix spectra.
"""

from .asympt import (
    ONE_PLUS_X_PLUS_X2_MOD2,
    ExtremaResult,
    OnePlusX,
    OnePlusXPlusX2Mod2,
    Piece,
    PiecewiseQuadratic,
    empirical_ratio,
    extrema,
    limit_function,
    oscillation_csv,
    oscillation_table,
)
from .blocks import (
    BlockSet,
    InferenceError,
    RecursionSpec,
    StabilizationError,
    a_1px,
    a_from_recursion,
    ab_first_mismatch,
    infer_recursion,
    line_complexity,
    line_complexity_range,
    recursion_1px,
    recursion_1xx2_mod2,
    scan_accessible,
    verify_ab_equivalence,
)
from .cli import Bitmap, main, render_fractal, to_pbm
from .fpoly import (
    TOTAL,
    CountTable,
    FpPoly,
    Row,
    count_coeff,
    cumulative_count,
    format_poly,
    is_prime,
    iter_rows,
    parse_poly,
    poly_pow,
    row_digits,
)
from .genfun import (
    InconclusiveError,
    ResidualReport,
    functional_residual,
    series_1px,
    series_1xx2,
    series_to_csv,
)
from .willson import (
    PENDING,
    CountMismatch,
    SimilarityClass,
    SpectralMismatchError,
    SpectralResult,
    SurveyResult,
    SurveyRow,
    TransferSystem,
    build_transfer,
    canonicalize,
    eigen_bound,
    enumerate_classes,
    minpoly_of_lambda,
    perron,
    survey,
    survey_tsv,
    verify_counts,
)

__version__ = "0.1.0"

__all__ = [
    "TOTAL",
    "PENDING",
    "FpPoly",
    "Row",
    "CountTable",
    "is_prime",
    "poly_pow",
    "row_digits",
    "iter_rows",
    "count_coeff",
    "cumulative_count",
    "parse_poly",
    "format_poly",
    "BlockSet",
    "scan_accessible",
    "line_complexity",
    "line_complexity_range",
    "a_1px",
    "ab_first_mismatch",
    "verify_ab_equivalence",
    "RecursionSpec",
    "a_from_recursion",
    "recursion_1px",
    "recursion_1xx2_mod2",
    "infer_recursion",
    "StabilizationError",
    "InferenceError",
    "series_1px",
    "series_1xx2",
    "functional_residual",
    "ResidualReport",
    "InconclusiveError",
    "series_to_csv",
    "OnePlusX",
    "OnePlusXPlusX2Mod2",
    "ONE_PLUS_X_PLUS_X2_MOD2",
    "Piece",
    "PiecewiseQuadratic",
    "ExtremaResult",
    "limit_function",
    "extrema",
    "empirical_ratio",
    "oscillation_table",
    "oscillation_csv",
    "TransferSystem",
    "SpectralResult",
    "SimilarityClass",
    "SurveyRow",
    "SurveyResult",
    "CountMismatch",
    "SpectralMismatchError",
    "build_transfer",
    "verify_counts",
    "perron",
    "minpoly_of_lambda",
    "canonicalize",
    "enumerate_classes",
    "survey",
    "survey_tsv",
    "eigen_bound",
    "Bitmap",
    "render_fractal",
    "to_pbm",
    "main",
]
