"""Spectral operator calculus for fractional power spaces.

Builds positive self-adjoint model operators (Dirichlet Laplacians, a
staggered-grid Stokes operator on divergence-free fields), computes
fractional powers, K-functionals, and real-interpolation norms, and
ships a CLI of verification experiments for the identities and bounds
relating them.
"""
from ._kernels import BACKEND
from .errors import (
    AmbiguousClassification,
    ConvergenceFailure,
    DimensionMismatch,
    EigensolveFailure,
    EmptyNullspace,
    FactorizationFailure,
    FracspaceError,
    InvalidConfig,
    InvalidExponentOrder,
    NonPositiveEigenvalue,
    NonPositiveT,
    NotInSubspace,
    NotOrthonormal,
    QuadratureNotConverged,
    RetractionIdentityViolated,
    SingularConstrainedOperator,
    SingularSystem,
    SolverFailure,
    ThetaOutOfRange,
    UnknownExperiment,
)
from .experiments import (
    EXPERIMENTS,
    CriticalityProfile,
    WeightFunctional,
    criticality_scan,
    decaying_probes,
    weight_test,
)
from .kfunctional import (
    QuadraticPair,
    QuadratureRule,
    build_quadratic_pair,
    congruence,
    i_theta,
    interp_norm,
    k_brute,
    k_quadratic,
    k_spectral,
    k_sum_brute,
    pair_from_model,
)
from .operators import (
    GridDomain,
    SobolevGrams,
    StokesSystem,
    build_stokes,
    grid_domain,
    interior_indices,
    laplacian_1d_analytic,
    laplacian_fd,
    sobolev_grams,
    stokes_ambient_model,
    stokes_spectral_model,
    zero_boundary_basis,
)
from .reporting import (
    RunConfig,
    VerificationReport,
    __version__,
    config_hash,
    make_report,
    make_run_config,
    report_to_csv,
    report_to_json,
    write_report,
)
from .retractions import (
    Retraction,
    gram_operator_norm,
    harmonic_lift,
    harmonic_retraction,
    stokes_retraction,
    subspace_probes,
    verify_intersection_lemma,
)
from .spectral import (
    CoeffVector,
    FractionalExponent,
    SpectralModel,
    apply_fractional_power,
    build_spectral_model,
    coeffs_from_json,
    coeffs_to_json,
    frac_inner,
    frac_norm,
    from_coeffs,
    gram_schmidt,
    higher_power_decomposition_check,
    model_from_json,
    model_to_json,
    to_coeffs,
)

__all__ = [
    "AmbiguousClassification",
    "BACKEND",
    "CoeffVector",
    "ConvergenceFailure",
    "CriticalityProfile",
    "DimensionMismatch",
    "EXPERIMENTS",
    "EigensolveFailure",
    "EmptyNullspace",
    "FactorizationFailure",
    "FracspaceError",
    "FractionalExponent",
    "GridDomain",
    "InvalidConfig",
    "InvalidExponentOrder",
    "NonPositiveEigenvalue",
    "NonPositiveT",
    "NotInSubspace",
    "NotOrthonormal",
    "QuadraticPair",
    "QuadratureNotConverged",
    "QuadratureRule",
    "Retraction",
    "RetractionIdentityViolated",
    "RunConfig",
    "SingularConstrainedOperator",
    "SingularSystem",
    "SobolevGrams",
    "SolverFailure",
    "SpectralModel",
    "StokesSystem",
    "ThetaOutOfRange",
    "UnknownExperiment",
    "VerificationReport",
    "WeightFunctional",
    "__version__",
    "apply_fractional_power",
    "build_quadratic_pair",
    "build_spectral_model",
    "build_stokes",
    "coeffs_from_json",
    "coeffs_to_json",
    "config_hash",
    "congruence",
    "criticality_scan",
    "decaying_probes",
    "frac_inner",
    "frac_norm",
    "from_coeffs",
    "gram_operator_norm",
    "gram_schmidt",
    "grid_domain",
    "harmonic_lift",
    "harmonic_retraction",
    "higher_power_decomposition_check",
    "i_theta",
    "interior_indices",
    "interp_norm",
    "k_brute",
    "k_quadratic",
    "k_spectral",
    "k_sum_brute",
    "laplacian_1d_analytic",
    "laplacian_fd",
    "make_report",
    "make_run_config",
    "model_from_json",
    "model_to_json",
    "pair_from_model",
    "report_to_csv",
    "report_to_json",
    "sobolev_grams",
    "stokes_ambient_model",
    "stokes_retraction",
    "stokes_spectral_model",
    "subspace_probes",
    "to_coeffs",
    "verify_intersection_lemma",
    "write_report",
    "zero_boundary_basis",
]
