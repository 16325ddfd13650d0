"""heatgen: exact short-time heat kernel coefficients for compact
symmetric spaces, computed from algebraic curvature data via a group
average, with independent numeric and closed-form cross-checks."""

from .averaging import (
    DetFactorizationReport,
    NumericAverage,
    average,
    check_det_factorization,
    fock_moment,
    numeric_average,
    random_rational_omegas,
    wick_moment,
)
from .catalog import (
    PRODUCT_FACTORS,
    builtin,
    catalog_names,
    load,
    product_spec,
    save,
    sphere_dimension,
)
from .curvature import (
    CheckResult,
    CurvatureReport,
    HolonomyRealization,
    SpaceSpec,
    ValidationReport,
    curvature_scalars,
    derive_holonomy,
    validate_symmetric_space,
)
from .errors import (
    CommutatorOutsideSpan,
    DegenerateBasis,
    HeatgenError,
    InternalInconsistency,
    InvalidSpaceSpec,
    NonPositiveT,
    OrderMismatch,
    OrderTooLarge,
    ParseError,
    UnknownSpace,
    ValidationError,
)
from .invariants import (
    HeatReport,
    compare,
    closed_form_coefficients,
    heat_coefficients,
    product_factorize,
    spectral_coefficient_fit,
    sphere_spectral_trace,
)
from .series import (
    DEFAULT_WORD_BUDGET,
    OmegaPolynomial,
    TSeries,
    bernoulli,
    exponentiate_with_prefactor,
    integrand_log_expansion,
    log_sinh_ratio_series,
)

__version__ = "0.1.0"

__all__ = [
    "DetFactorizationReport",
    "NumericAverage",
    "average",
    "check_det_factorization",
    "fock_moment",
    "numeric_average",
    "random_rational_omegas",
    "wick_moment",
    "PRODUCT_FACTORS",
    "builtin",
    "catalog_names",
    "load",
    "product_spec",
    "save",
    "sphere_dimension",
    "CheckResult",
    "CurvatureReport",
    "HolonomyRealization",
    "SpaceSpec",
    "ValidationReport",
    "curvature_scalars",
    "derive_holonomy",
    "validate_symmetric_space",
    "CommutatorOutsideSpan",
    "DegenerateBasis",
    "HeatgenError",
    "InternalInconsistency",
    "InvalidSpaceSpec",
    "NonPositiveT",
    "OrderMismatch",
    "OrderTooLarge",
    "ParseError",
    "UnknownSpace",
    "ValidationError",
    "HeatReport",
    "compare",
    "closed_form_coefficients",
    "heat_coefficients",
    "product_factorize",
    "spectral_coefficient_fit",
    "sphere_spectral_trace",
    "DEFAULT_WORD_BUDGET",
    "OmegaPolynomial",
    "TSeries",
    "bernoulli",
    "exponentiate_with_prefactor",
    "integrand_log_expansion",
    "log_sinh_ratio_series",
    "__version__",
]
